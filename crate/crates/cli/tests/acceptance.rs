//! Acceptance suite: one PASS/FAIL line per primary criterion.
//!
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails. Exits non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use codat_core::corpus::{self, Variant};
use codat_core::lexer::{self, SegmentKind};
use codat_core::model::{DiagnosticKind, Snapshot, SourceRange};
use codat_core::parser::parse_file;
use codat_core::{linker, tracker, Config};
use common::{corpus_dir, edit, run, BIN};
use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, RngAlgorithm, TestError, TestRng, TestRunner};
use serde::Deserialize;
use serde_json::Value;

const TRIALS: u32 = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: &[Criterion] = &[
        ("corpus parse fidelity", parse_fidelity),
        ("diff idempotence", diff_idempotence),
        ("staleness locality", staleness_locality),
        ("re-anchoring robustness", reanchoring_robustness),
        ("fingerprint invariance", fingerprint_invariance),
        ("verdict reproduction", verdict_reproduction),
        ("watch latency", watch_latency),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(panic_message(p.as_ref())));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    let _ = panic::take_hook();
    println!("\n{} passed; {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panicked".into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn runner() -> TestRunner {
    let config = RunnerConfig {
        cases: TRIALS,
        failure_persistence: None,
        ..RunnerConfig::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_trials<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner().run(&strategy, test).map_err(|e| match e {
        TestError::Fail(reason, value) => format!("{reason}; minimal input {value:?}"),
        TestError::Abort(reason) => format!("aborted: {reason}"),
    })
}

// ---------------------------------------------------------------- fidelity

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct Golden {
    nodes: BTreeMap<String, Vec<GoldenNode>>,
    links: BTreeMap<String, Vec<(usize, usize)>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct GoldenNode {
    node: String,
    anchor_lines: Vec<(usize, usize)>,
}

fn parse_fidelity() -> Outcome {
    let golden: Golden =
        serde_json::from_str(include_str!("../../core/fixtures/golden/corpus.json")).unwrap();
    let cfg = Config::default();
    let t0 = Instant::now();
    let parsed: Vec<_> = corpus::FILES
        .iter()
        .map(|(name, text)| {
            let p = parse_file(name, text, &cfg);
            let links = linker::link_file(&p, text, &cfg.syntax);
            (*name, p, links)
        })
        .collect();
    let elapsed = t0.elapsed();

    let mut links = BTreeMap::new();
    for (name, p, (file_links, diags)) in &parsed {
        ensure(p.diagnostics.is_empty() && diags.is_empty(), || format!("{name}: grammar diagnostics"))?;
        let got: Vec<(String, Vec<(usize, usize)>)> = p
            .nodes()
            .map(|n| (n.display_name(), n.anchors.iter().map(|a| (a.range.start_line, a.range.end_line)).collect()))
            .collect();
        let want: Vec<(String, Vec<(usize, usize)>)> = golden
            .nodes
            .get(*name)
            .map(|ns| ns.iter().map(|n| (n.node.clone(), n.anchor_lines.clone())).collect())
            .unwrap_or_default();
        ensure(got == want, || format!("{name}: nodes differ from golden: {got:?}"))?;
        for link in file_links {
            let node = p.nodes().find(|n| n.id == link.node_id).unwrap();
            links.insert(node.display_name(), link.code_ranges.iter().map(|r| (r.start_line, r.end_line)).collect::<Vec<_>>());
        }
    }
    ensure(links == golden.links, || format!("links differ from golden: {links:?}"))?;

    let query = &parsed.iter().find(|(n, ..)| *n == "Query.java").unwrap().1;
    let labels = |scope: &str| -> BTreeSet<String> {
        query.nodes().filter(|n| n.scope == scope).map(|n| n.label.raw.clone()).collect()
    };
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let add_doc = set(&["CS1", "CS2", "CS3", "CS4", "CS5"]);
    let ctor = set(&["SP1", "SP2", "SP3", "CS0", "CS1", "CS2", "AS0", "AS1", "AS2", "AS3", "AS4"]);
    ensure(labels("Query.addDoc") == add_doc, || format!("addDoc labels {:?}", labels("Query.addDoc")))?;
    ensure(labels("Query.Query#1") == ctor, || format!("constructor labels {:?}", labels("Query.Query#1")))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "addDoc {{CS1..CS5}}, constructor {{SP1..SP3, CS0..CS2, AS0..AS4}}, {} nodes and {} links match golden, {elapsed:.2?}",
        golden.nodes.values().map(Vec::len).sum::<usize>(),
        links.len()
    ))
}

// ---------------------------------------------------------------- tracker

fn diff_idempotence() -> Outcome {
    let dir = corpus_dir(Variant::Original);
    let cfg = Config::default();
    for i in 0..100 {
        let baseline = tracker::take_snapshot(dir.path(), &cfg).map_err(|e| e.to_string())?;
        let current = tracker::scan_project(dir.path(), &cfg).map_err(|e| e.to_string())?;
        let diags = tracker::diff(&baseline, &current).map_err(|e| e.to_string())?;
        ensure(diags.is_empty(), || format!("run {i}: {diags:?}"))?;
        let grammar: usize = current.files.values().map(|f| f.diagnostics.len()).sum();
        ensure(grammar == 0, || format!("run {i}: {grammar} grammar diagnostics"))?;
    }
    Ok("100 runs, 0 diagnostics".into())
}

fn staleness_locality() -> Outcome {
    let dir = corpus_dir(Variant::Original);
    let cfg = Config::default();
    let baseline = tracker::take_snapshot(dir.path(), &cfg).map_err(|e| e.to_string())?;
    let buggy = corpus::query_source(Variant::SeededBug).map_err(|e| e.to_string())?;
    std::fs::write(dir.path().join("Query.java"), &buggy).unwrap();
    let current = tracker::scan_project(dir.path(), &cfg).map_err(|e| e.to_string())?;
    let diags = tracker::diff(&baseline, &current).map_err(|e| e.to_string())?;
    let edited_line = buggy.lines().position(|l| l.contains("if (b) return;")).unwrap() + 1;
    ensure(diags.len() == 1, || format!("{} diagnostics: {diags:?}", diags.len()))?;
    let d = &diags[0];
    ensure(d.kind == DiagnosticKind::StaleComment, || format!("kind {:?}", d.kind))?;
    ensure(d.node.as_deref() == Some("CS1@Query.addDoc"), || format!("node {:?}", d.node))?;
    let covers = d.code_ranges.iter().any(|r| (r.start_line..=r.end_line).contains(&edited_line));
    ensure(covers, || format!("code ranges {:?} miss line {edited_line}", d.code_ranges))?;
    Ok(format!("1 StaleComment on CS1@Query.addDoc covering line {edited_line}"))
}

fn snapshot_of(template: &Snapshot, sources: &[(&str, String)], cfg: &Config) -> Snapshot {
    let mut snap = template.clone();
    snap.files = sources
        .iter()
        .map(|(name, text)| (name.to_string(), tracker::scan_source(name, text, cfg)))
        .collect();
    snap
}

fn is_comment_only(line: &str) -> bool {
    line.trim_start().starts_with("//")
}

/// Line gaps of one file where an insertion is outside every linked region.
/// Gap `g` sits between 1-based lines `g` and `g + 1`.
struct Gaps {
    blank: Vec<usize>,
    comment: Vec<usize>,
}

fn gaps(text: &str, ranges: &[SourceRange]) -> Gaps {
    let lines: Vec<&str> = text.lines().collect();
    let comment_at = |l: usize| l >= 1 && l <= lines.len() && is_comment_only(lines[l - 1]);
    let inside = |g: usize| ranges.iter().any(|r| r.start_line <= g && g < r.end_line);
    let mut out = Gaps { blank: Vec::new(), comment: Vec::new() };
    for g in 0..=lines.len() {
        if inside(g) {
            continue;
        }
        let (before, after) = (comment_at(g), comment_at(g + 1));
        if !(before && after) {
            out.blank.push(g);
        }
        if !before && !after {
            out.comment.push(g);
        }
    }
    out
}

#[derive(Debug, Clone)]
struct Insertion {
    file: prop::sample::Index,
    gap: prop::sample::Index,
    comment: bool,
    indent: usize,
    text: String,
}

fn insertion() -> impl Strategy<Value = Insertion> {
    (any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<bool>(), 0usize..12, "[a-z][a-z0-9 ,.;(){}=]{0,30}")
        .prop_map(|(file, gap, comment, indent, text)| Insertion { file, gap, comment, indent, text })
}

fn reanchoring_robustness() -> Outcome {
    let cfg = Config::default();
    let dir = corpus_dir(Variant::Original);
    let template = tracker::scan_project(dir.path(), &cfg).map_err(|e| e.to_string())?;
    let originals: Vec<(&str, String)> = corpus::FILES.iter().map(|(n, t)| (*n, t.to_string())).collect();
    let baseline = snapshot_of(&template, &originals, &cfg);
    let file_gaps: Vec<Gaps> = originals
        .iter()
        .map(|(name, text)| {
            let ranges: Vec<SourceRange> =
                baseline.files[*name].links.iter().flat_map(|l| l.code_ranges.iter().copied()).collect();
            gaps(text, &ranges)
        })
        .collect();

    run_trials(prop::collection::vec(insertion(), 1..=6), |ins| {
        let mut per_file: BTreeMap<usize, Vec<(usize, String)>> = BTreeMap::new();
        for i in &ins {
            let f = i.file.index(originals.len());
            let pool = if i.comment { &file_gaps[f].comment } else { &file_gaps[f].blank };
            let line = if i.comment { format!("{}//{}", " ".repeat(i.indent), i.text) } else { String::new() };
            per_file.entry(f).or_default().push((pool[i.gap.index(pool.len())], line));
        }
        let mut sources = originals.clone();
        for (f, mut inserts) in per_file {
            inserts.sort_by_key(|(g, _)| std::cmp::Reverse(*g));
            let mut lines: Vec<String> = sources[f].1.lines().map(String::from).collect();
            for (g, line) in inserts {
                lines.insert(g, line);
            }
            sources[f].1 = lines.join("\n") + "\n";
        }
        let current = snapshot_of(&template, &sources, &cfg);
        let diags = tracker::diff(&baseline, &current).unwrap();
        let bad: Vec<_> = diags
            .iter()
            .filter(|d| {
                matches!(
                    d.kind,
                    DiagnosticKind::StaleComment | DiagnosticKind::OrphanedComment | DiagnosticKind::BrokenLink
                )
            })
            .map(|d| format!("{:?} {:?}", d.kind, d.node))
            .collect();
        prop_assert!(bad.is_empty(), "{:?}", bad);
        Ok(())
    })?;
    Ok(format!("{TRIALS} trials, 0 stale/orphaned/broken"))
}

// ---------------------------------------------------------------- fingerprints

/// Mutation sites inside the linked regions of `Query.java`, tagged with the
/// owning node's index into `links`.
struct Sites {
    source: String,
    fingerprints: BTreeMap<String, String>,
    whitespace: Vec<(usize, std::ops::Range<usize>, bool)>,
    comments: Vec<(usize, std::ops::Range<usize>)>,
    code: Vec<(usize, usize)>,
    links: Vec<(String, Vec<SourceRange>)>,
}

fn sites(cfg: &Config) -> Sites {
    let source = corpus::original("Query.java").unwrap().to_string();
    let parsed = parse_file("Query.java", &source, cfg);
    let (links, _) = linker::link_file(&parsed, &source, &cfg.syntax);
    let labeled: Vec<SourceRange> = parsed.labeled().map(|r| r.range).collect();
    let segs = lexer::segments(&source, &cfg.syntax);
    let bytes = source.as_bytes();
    let mut out = Sites {
        fingerprints: links.iter().map(|l| (l.node_id.0.clone(), l.code_fingerprint.clone())).collect(),
        whitespace: Vec::new(),
        comments: Vec::new(),
        code: Vec::new(),
        links: links.iter().map(|l| (l.node_id.0.clone(), l.code_ranges.clone())).collect(),
        source: String::new(),
    };
    for (li, link) in links.iter().enumerate() {
        for r in &link.code_ranges {
            for (si, seg) in segs.iter().enumerate() {
                let (start, end) = (seg.start.max(r.start), seg.end.min(r.end));
                if start >= end {
                    continue;
                }
                match seg.kind {
                    SegmentKind::LineComment if seg.start >= r.start => {
                        if !labeled.iter().any(|l| l.contains(seg.start)) {
                            out.comments.push((li, seg.start + 2..seg.end));
                        }
                    }
                    SegmentKind::Code => {
                        let next_is_comment = segs.get(si + 1).is_some_and(|s| s.is_comment());
                        let mut i = start;
                        while i < end {
                            if bytes[i] == b' ' || bytes[i] == b'\t' {
                                let j = (i..end).find(|&j| bytes[j] != b' ' && bytes[j] != b'\t').unwrap_or(end);
                                let line_start = source[..i].rfind('\n').map_or(0, |p| p + 1);
                                let code_before = !source[line_start..i].trim().is_empty();
                                let before_comment = j == seg.end && next_is_comment;
                                // Re-indenting a comment-only line could change how it coalesces.
                                if code_before || !before_comment {
                                    // Breaking the line must not move a trailing comment onto its own line.
                                    let may_break = !before_comment && j < end && bytes[j] != b'\n';
                                    out.whitespace.push((li, i..j, may_break));
                                }
                                i = j;
                            } else {
                                if !bytes[i].is_ascii_whitespace() {
                                    out.code.push((li, i));
                                }
                                i += 1;
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    out.source = source;
    out
}

fn relinked(source: &str, cfg: &Config) -> BTreeMap<String, String> {
    let parsed = parse_file("Query.java", source, cfg);
    let (links, _) = linker::link_file(&parsed, source, &cfg.syntax);
    parsed
        .nodes()
        .map(|n| {
            let fp = links.iter().find(|l| l.node_id == n.id).map_or(String::new(), |l| l.code_fingerprint.clone());
            (n.id.0.clone(), fp)
        })
        .filter(|(_, fp)| !fp.is_empty())
        .collect()
}

fn apply(source: &str, mut edits: Vec<(std::ops::Range<usize>, String)>) -> String {
    edits.sort_by_key(|(r, _)| std::cmp::Reverse(r.start));
    edits.dedup_by_key(|(r, _)| r.start);
    let mut out = source.to_string();
    for (r, text) in edits {
        out.replace_range(r, &text);
    }
    out
}

fn fingerprint_invariance() -> Outcome {
    let cfg = Config::default();
    let s = sites(&cfg);
    if s.whitespace.is_empty() || s.comments.is_empty() || s.code.is_empty() {
        return Err("no mutation sites".into());
    }

    let ws = prop::collection::vec(
        (any::<prop::sample::Index>(), "[ \t]{1,6}", 0usize..3, "[ \t]{0,8}"),
        1..=4,
    );
    run_trials(ws, |muts| {
        let edits = muts
            .iter()
            .map(|(idx, run, newlines, indent)| {
                let (_, range, may_break) = &s.whitespace[idx.index(s.whitespace.len())];
                let mut text = run.clone();
                if *may_break && *newlines > 0 {
                    text = "\n".repeat(*newlines) + indent;
                    if indent.is_empty() {
                        text.push(' ');
                    }
                }
                (range.clone(), text)
            })
            .collect();
        let mutated = apply(&s.source, edits);
        prop_assert_eq!(&relinked(&mutated, &cfg), &s.fingerprints);
        Ok(())
    })?;

    let comments = prop::collection::vec(
        (any::<prop::sample::Index>(), "[a-z][a-zA-Z0-9 ,.;(){}=+<>]{0,30}"),
        1..=3,
    );
    run_trials(comments, |muts| {
        let edits = muts
            .iter()
            .map(|(idx, text)| (s.comments[idx.index(s.comments.len())].1.clone(), text.clone()))
            .collect();
        let mutated = apply(&s.source, edits);
        prop_assert_eq!(&relinked(&mutated, &cfg), &s.fingerprints);
        Ok(())
    })?;

    let code = (any::<prop::sample::Index>(), "[a-zA-Z0-9_]");
    run_trials(code, |(idx, ch)| {
        let (li, at) = s.code[idx.index(s.code.len())];
        prop_assume!(s.source.as_bytes()[at] != ch.as_bytes()[0]);
        let mutated = apply(&s.source, vec![(at..at + 1, ch)]);
        let (id, ranges) = &s.links[li];
        let direct_old = linker::fingerprint_segments(ranges.iter().map(|r| r.slice(&s.source)), &cfg.syntax);
        let direct_new = linker::fingerprint_segments(ranges.iter().map(|r| r.slice(&mutated)), &cfg.syntax);
        prop_assert_ne!(direct_old, direct_new);
        let after = relinked(&mutated, &cfg);
        prop_assert_ne!(after.get(id), s.fingerprints.get(id));
        Ok(())
    })?;

    Ok(format!(
        "{TRIALS} whitespace, {TRIALS} comment-text and {TRIALS} code-character trials over {} linked nodes",
        s.fingerprints.len()
    ))
}

// ---------------------------------------------------------------- end to end

fn verdict_reproduction() -> Outcome {
    let node = "CS1@Query.java:addDoc";
    let good = corpus_dir(Variant::WithoutAssertions);
    let (code, out, err) = run(good.path(), &["check", "--node", node, "--json"]);
    let v: Value = serde_json::from_str(&out).map_err(|e| format!("{e}: {out}{err}"))?;
    ensure(code == 0, || format!("correct addDoc exit {code}: {out}{err}"))?;
    ensure(v["results"][0]["outcome"] == "consistent", || format!("correct addDoc: {v}"))?;

    let bad = corpus_dir(Variant::SeededBug);
    let (code, out, err) = run(bad.path(), &["check", "--node", node, "--json"]);
    let v: Value = serde_json::from_str(&out).map_err(|e| format!("{e}: {out}{err}"))?;
    ensure(code == 4, || format!("buggy addDoc exit {code}: {out}{err}"))?;
    ensure(v["results"][0]["outcome"] == "inconsistent", || format!("buggy addDoc: {v}"))?;
    let explanation = v["diagnostics"][0]["message"].as_str().unwrap_or_default();
    ensure(explanation.contains("CS4"), || format!("explanation lacks CS4: {explanation}"))?;
    Ok("replay backend: correct consistent (exit 0), buggy inconsistent citing CS4 (exit 4)".into())
}

fn watch_latency() -> Outcome {
    let dir = corpus_dir(Variant::Original);
    let (code, _, err) = run(dir.path(), &["scan"]);
    ensure(code == 0, || format!("scan failed: {err}"))?;
    let mut child = Command::new(BIN)
        .args(["watch", dir.path().to_str().unwrap()])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let stdout = child.stdout.take().unwrap();
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        for line in BufReader::new(stdout).lines().map_while(Result::ok) {
            if tx.send((Instant::now(), line)).is_err() {
                break;
            }
        }
    });
    let result = (|| {
        rx.recv_timeout(Duration::from_secs(5)).map_err(|_| "no initial batch".to_string())?;
        let edits = [
            ("Map H = new HashMap();", "Map H = new TreeMap();", "CS2@Query.addKey"),
            ("if (!b) return;", "if (b) return;", "CS1@Query.addDoc"),
            ("keys[0] = w;", "keys[0] = w.trim();", "CS0@Query.Query#1"),
        ];
        let mut worst = Duration::ZERO;
        for (from, to, node) in edits {
            std::thread::sleep(Duration::from_millis(400));
            let t0 = Instant::now();
            edit(dir.path(), "Query.java", from, to);
            let (at, line) = rx
                .recv_timeout(Duration::from_secs(3))
                .map_err(|_| format!("no batch after editing {node}"))?;
            let latency = at - t0;
            worst = worst.max(latency);
            let batch: Value = serde_json::from_str(&line).map_err(|e| e.to_string())?;
            let nodes: Vec<&str> = batch["diagnostics"].as_array().unwrap().iter().filter_map(|d| d["node"].as_str()).collect();
            ensure(nodes.contains(&node), || format!("batch lacks {node}: {line}"))?;
            ensure(latency < Duration::from_secs(1), || format!("{node}: latency {latency:?}"))?;
        }
        Ok(format!("3 edits, worst latency {worst:.0?} (debounce 300ms)"))
    })();
    let _ = child.kill();
    let _ = child.wait();
    result
}
