//! End-to-end tests of the one-shot commands.

mod common;

use codat_core::corpus::Variant;
use common::{assert_schema, codat, corpus_dir, edit, run};
use serde_json::Value;

const SCAN_REPORT: &str = "\
Doc.java           0 nodes    0 linked    22 comments
DocCnt.java        0 nodes    0 linked     6 comments
Engine.java        0 nodes    0 linked    22 comments
Query.java        23 nodes   11 linked    71 comments
TitleTable.java    0 nodes    0 linked     8 comments
WordTable.java     0 nodes    0 linked    41 comments
23 nodes in 6 files
";

#[test]
fn scan_reports_per_file_counts() {
    let dir = corpus_dir(Variant::Original);
    let (code, out, _) = run(dir.path(), &["scan"]);
    assert_eq!(code, 0);
    assert_eq!(out, SCAN_REPORT);
    assert!(dir.path().join(".codat/snapshot.json").is_file());
}

#[test]
fn scan_json_matches_schema() {
    let dir = corpus_dir(Variant::Original);
    let (code, out, _) = run(dir.path(), &["scan", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_schema("scan", &v);
    assert_eq!(v["totalNodes"], 23);
}

#[test]
fn scan_empty_directory_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = run(dir.path(), &["scan"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("no files matching"), "{err}");
}

#[test]
fn strict_scan_fails_on_grammar_violations() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.java"), "class A {\n  //CS1.2: orphan child\n  int x;\n}\n").unwrap();
    let (code, out, _) = run(dir.path(), &["scan"]);
    assert_eq!(code, 0);
    assert!(out.contains("GrammarViolation"));
    let (code, out, _) = run(dir.path(), &["scan", "--strict", "--json"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_schema("scan", &v);
    assert_eq!(v["grammarViolations"].as_array().unwrap().len(), 1);
}

#[test]
fn config_flag_overrides_discovery() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.rs"), "fn f() {\n    //CS1: go\n    go();\n}\n").unwrap();
    let (code, _, _) = run(dir.path(), &["scan"]);
    assert_eq!(code, 1);
    let cfg = dir.path().join("alt.toml");
    std::fs::write(&cfg, "[syntax]\nextensions = [\"rs\"]\n").unwrap();
    let (code, out, _) = run(dir.path(), &["scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("a.rs"));
}

#[test]
fn diff_clean_edit_and_ack() {
    let dir = corpus_dir(Variant::Original);
    assert_eq!(run(dir.path(), &["scan"]).0, 0);
    let (code, out, _) = run(dir.path(), &["diff"]);
    assert_eq!((code, out.as_str()), (0, ""));

    edit(dir.path(), "Query.java", "if (!b) return;", "if (b) return;");
    let (code, out, _) = run(dir.path(), &["diff"]);
    assert_eq!(code, 3);
    assert_eq!(
        out.lines().next().unwrap(),
        "Query.java:168 StaleComment CS1@Query.addDoc [comment 168; code 176-181]"
    );
    let (code, out, _) = run(dir.path(), &["diff", "--json"]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_schema("diff", &v);
    assert_eq!(v["diagnostics"].as_array().unwrap().len(), 1);

    let (code, out, _) = run(dir.path(), &["diff", "--ack", "CS1@Query.java:addDoc", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_schema("diff", &v);
    assert_eq!(v["acknowledged"][0]["node"], "CS1@Query.addDoc");
    assert_eq!(run(dir.path(), &["diff"]).0, 0);
}

#[test]
fn diff_without_snapshot_fails() {
    let dir = corpus_dir(Variant::Original);
    let (code, _, err) = run(dir.path(), &["diff"]);
    assert_eq!(code, 1);
    assert!(err.contains("codat scan"), "{err}");
}

#[test]
fn ambiguous_selector_lists_candidates() {
    let dir = corpus_dir(Variant::Original);
    run(dir.path(), &["scan"]);
    let (code, _, err) = run(dir.path(), &["check", "--node", "CS2@Query.java"]);
    assert_eq!(code, 1);
    assert!(err.contains("CS2@Query.java:Query.addDoc") && err.contains("CS2@Query.java:Query.addKey"), "{err}");
}

#[test]
fn check_replay_verdicts() {
    let good = corpus_dir(Variant::WithoutAssertions);
    let (code, out, _) = run(good.path(), &["check", "--node", "CS1@Query.java:addDoc"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("CS1@Query.addDoc  consistent"));

    let bad = corpus_dir(Variant::SeededBug);
    let (code, out, _) = run(bad.path(), &["check", "--node", "CS1@Query.java:addDoc", "--json"]);
    assert_eq!(code, 4);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_schema("check", &v);
    assert_eq!(v["results"][0]["outcome"], "inconsistent");
    assert!(v["diagnostics"][0]["message"].as_str().unwrap().contains("CS4"));
}

#[test]
fn check_constant_and_missing_key() {
    let dir = corpus_dir(Variant::Original);
    let (code, out, _) = run(dir.path(), &["check", "--all", "--backend", "constant", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_schema("check", &v);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 11);
    assert!(results.iter().all(|r| r["outcome"] == "consistent"));

    let (code, _, err) = run(dir.path(), &["check", "--all", "--backend", "http"]);
    assert_eq!(code, 1);
    assert!(err.contains("CODAT_API_KEY"), "{err}");
}

#[test]
fn check_errors_are_reported_per_node() {
    let dir = corpus_dir(Variant::Original);
    let (code, out, _) = run(
        dir.path(),
        &["check", "--node", "CS4@Query.java:addDoc", "--backend", "constant", "--json"],
    );
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_schema("check", &v);
    assert!(v["errors"][0]["message"].as_str().unwrap().contains("no linked code region"));
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(codat(&["--help"]).status.code(), Some(0));
    assert_eq!(codat(&["frobnicate"]).status.code(), Some(1));
}
