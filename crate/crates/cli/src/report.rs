//! JSON report shapes and human-readable rendering.

use std::io::{self, Write};

use codat_core::checker::CheckResult;
use codat_core::model::{Diagnostic, Outcome, SourceRange};
use serde::Serialize;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    pub project_root: String,
    pub files: Vec<FileSummary>,
    pub total_nodes: usize,
    pub grammar_violations: Vec<Diagnostic>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FileSummary {
    pub file: String,
    pub comments: usize,
    pub nodes: usize,
    pub linked: usize,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffReport {
    pub acknowledged: Vec<Acked>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Acked {
    pub node_id: String,
    pub node: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub results: Vec<CheckRow>,
    pub diagnostics: Vec<Diagnostic>,
    pub errors: Vec<CheckError>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRow {
    pub node_id: String,
    pub node: String,
    pub outcome: Outcome,
    pub backend_id: String,
    pub cached: bool,
    pub explanation: String,
}

impl From<&CheckResult> for CheckRow {
    fn from(r: &CheckResult) -> Self {
        Self {
            node_id: r.node_id.to_string(),
            node: r.node.clone(),
            outcome: r.verdict.outcome,
            backend_id: r.verdict.backend_id.clone(),
            cached: r.cached,
            explanation: r.verdict.explanation.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckError {
    pub selector: String,
    pub message: String,
}

pub fn write_json(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn lines(r: &SourceRange) -> String {
    if r.start_line == r.end_line {
        r.start_line.to_string()
    } else {
        format!("{}-{}", r.start_line, r.end_line)
    }
}

pub fn write_diagnostic(out: &mut dyn Write, d: &Diagnostic) -> io::Result<()> {
    let line = d.comment_range.map_or(String::new(), |r| format!(":{}", r.start_line));
    let node = d.node.as_deref().map_or(String::new(), |n| format!(" {n}"));
    let mut ranges = Vec::new();
    if let Some(r) = &d.comment_range {
        ranges.push(format!("comment {}", lines(r)));
    }
    if !d.code_ranges.is_empty() {
        let code: Vec<String> = d.code_ranges.iter().map(lines).collect();
        ranges.push(format!("code {}", code.join(",")));
    }
    let ranges = if ranges.is_empty() {
        String::new()
    } else {
        format!(" [{}]", ranges.join("; "))
    };
    writeln!(out, "{}{line} {}{node}{ranges}", d.file, d.kind)?;
    let first = d.message.lines().next().unwrap_or("");
    writeln!(out, "    {first}")
}
