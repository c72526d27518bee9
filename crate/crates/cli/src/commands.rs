//! `scan`, `diff` and `check`.

use std::io::Write;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use codat_core::checker::{BackendConfig, Checker};
use codat_core::model::{DiagnosticKind, NodeId, Outcome};
use codat_core::tracker::{self, Project};
use codat_core::{select, Config};

use crate::args::{BackendArgs, BackendKind, CheckArgs, DiffArgs, OutcomeArg, ScanArgs};
use crate::exit::Exit;
use crate::report::{
    write_diagnostic, write_json, Acked, CheckError, CheckReport, CheckRow, DiffReport, FileSummary,
    ScanReport,
};

pub fn load_config(root: &Path, explicit: Option<&Path>) -> Result<Config> {
    Ok(Config::discover(root, explicit)?)
}

pub fn scan(args: &ScanArgs, config: &Config, out: &mut dyn Write) -> Result<Exit> {
    let snap = tracker::take_snapshot(&args.root, config)?;
    let files: Vec<FileSummary> = snap
        .files
        .iter()
        .map(|(file, e)| FileSummary {
            file: file.clone(),
            comments: e.records.len(),
            nodes: e.all_nodes().count(),
            linked: e.links.len(),
        })
        .collect();
    let violations: Vec<_> = snap.files.values().flat_map(|e| e.diagnostics.clone()).collect();
    let report = ScanReport {
        project_root: snap.project_root.clone(),
        total_nodes: files.iter().map(|f| f.nodes).sum(),
        files,
        grammar_violations: violations,
    };
    if args.json {
        write_json(out, &report)?;
    } else {
        let width = report.files.iter().map(|f| f.file.len()).max().unwrap_or(0);
        for f in &report.files {
            writeln!(
                out,
                "{:width$}  {:>3} nodes  {:>3} linked  {:>4} comments",
                f.file, f.nodes, f.linked, f.comments
            )?;
        }
        writeln!(out, "{} nodes in {} files", report.total_nodes, report.files.len())?;
        for d in &report.grammar_violations {
            write_diagnostic(out, d)?;
        }
    }
    Ok(if args.strict && !report.grammar_violations.is_empty() {
        Exit::Grammar
    } else {
        Exit::Clean
    })
}

pub fn diff(args: &DiffArgs, config: &Config, out: &mut dyn Write) -> Result<Exit> {
    let mut project = Project::open(&args.root, config.clone())?;
    let mut acked = Vec::new();
    for sel in &args.ack {
        let (_, node) = select::resolve(sel, project.baseline())?;
        let (id, name) = (node.id.clone(), node.display_name());
        project.acknowledge(&id).with_context(|| format!("cannot acknowledge {sel}"))?;
        acked.push(Acked {
            node_id: id.to_string(),
            node: name,
        });
    }
    let diagnostics = project.diagnostics()?;
    let exit = if diagnostics.iter().any(|d| d.kind.is_drift()) {
        Exit::Drift
    } else {
        Exit::Clean
    };
    if args.json {
        write_json(out, &DiffReport { acknowledged: acked, diagnostics })?;
    } else {
        for a in &acked {
            writeln!(out, "acknowledged {}", a.node)?;
        }
        for d in &diagnostics {
            write_diagnostic(out, d)?;
        }
    }
    Ok(exit)
}

pub fn backend_config(args: &BackendArgs) -> Result<BackendConfig> {
    Ok(match args.backend {
        BackendKind::Replay => BackendConfig::Replay {
            fixture_dir: args.fixtures.clone(),
        },
        BackendKind::Constant => BackendConfig::Constant {
            outcome: match args.outcome {
                OutcomeArg::Consistent => Outcome::Consistent,
                OutcomeArg::Inconsistent => Outcome::Inconsistent,
                OutcomeArg::Unknown => Outcome::Unknown,
            },
        },
        BackendKind::Http => BackendConfig::Http {
            endpoint_url: args.endpoint.clone(),
            api_key_env: args.api_key_env.clone(),
            timeout: Duration::try_from_secs_f64(args.timeout)
                .ok()
                .filter(|t| !t.is_zero())
                .context("--timeout must be a positive number of seconds")?,
            max_retries: args.retries,
        },
    })
}

pub fn check(args: &CheckArgs, config: &Config, out: &mut dyn Write) -> Result<Exit> {
    let checker = Checker::from_config(&backend_config(&args.backend)?, config)?;
    let snap = tracker::scan_project(&args.root, config)?;

    let mut selectors: Vec<String> = Vec::new();
    let mut ids: Vec<NodeId> = Vec::new();
    if args.all {
        for entry in snap.files.values() {
            for link in &entry.links {
                selectors.push(link.node_id.to_string());
                ids.push(link.node_id.clone());
            }
        }
    } else {
        for sel in &args.nodes {
            let (_, node) = select::resolve(sel, &snap)?;
            selectors.push(sel.clone());
            ids.push(node.id.clone());
        }
    }

    let mut report = CheckReport {
        results: Vec::new(),
        diagnostics: Vec::new(),
        errors: Vec::new(),
    };
    for (sel, res) in selectors.iter().zip(checker.check_nodes(&ids, &snap, config)) {
        match res {
            Ok(r) => {
                report.results.push(CheckRow::from(&r));
                report.diagnostics.extend(r.diagnostic);
            }
            Err(e) => report.errors.push(CheckError {
                selector: sel.clone(),
                message: e.to_string(),
            }),
        }
    }

    if args.json {
        write_json(out, &report)?;
    } else {
        let width = report.results.iter().map(|r| r.node.len()).max().unwrap_or(0);
        for r in &report.results {
            let cached = if r.cached { " (cached)" } else { "" };
            writeln!(out, "{:width$}  {:<12}  {}{cached}", r.node, r.outcome.to_string(), r.backend_id)?;
        }
        for d in &report.diagnostics {
            writeln!(out)?;
            writeln!(out, "{} is inconsistent with its code:", d.node.as_deref().unwrap_or("?"))?;
            for line in d.message.lines() {
                writeln!(out, "    {line}")?;
            }
        }
        for e in &report.errors {
            writeln!(out, "error: {}: {}", e.selector, e.message)?;
        }
    }
    Ok(if !report.errors.is_empty() {
        Exit::Operational
    } else if report.diagnostics.iter().any(|d| d.kind == DiagnosticKind::Inconsistent) {
        Exit::Inconsistent
    } else {
        Exit::Clean
    })
}
