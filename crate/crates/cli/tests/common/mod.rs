#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use codat_core::corpus::{self, Variant};
use tempfile::TempDir;

pub const BIN: &str = env!("CARGO_BIN_EXE_codat");

pub fn corpus_dir(variant: Variant) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    corpus::write_corpus(dir.path(), variant).unwrap();
    dir
}

pub fn codat(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CODAT_API_KEY")
        .output()
        .unwrap()
}

pub fn run(root: &Path, args: &[&str]) -> (i32, String, String) {
    let mut full: Vec<&str> = vec![args[0], root.to_str().unwrap()];
    full.extend(&args[1..]);
    let out = codat(&full);
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

pub fn edit(root: &Path, file: &str, from: &str, to: &str) {
    let path = root.join(file);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.matches(from).count(), 1, "{from}");
    std::fs::write(path, text.replace(from, to)).unwrap();
}

/// Asserts that `json` validates against `schemas/<name>.schema.json`.
pub fn assert_schema(name: &str, json: &serde_json::Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("schemas/{name}.schema.json"));
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(json).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{json:#}");
}
