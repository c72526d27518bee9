//! Comment extraction, label and clause recognition, and tree building.

mod clause;
mod extract;
mod label;
mod tree;

pub use clause::parse_clauses;
pub use extract::{coalesce, extract_comments, Extraction};
pub use label::{parse_label, split_label};
pub use tree::{anchor_for, build_tree, node_id, TreeBuild};

use crate::config::Config;
use crate::model::{CommentNode, CommentRecord, Diagnostic};
use crate::structure::FileStructure;

/// Everything the parser learns about one file.
#[derive(Debug, Clone)]
pub struct ParsedFile {
    pub file: String,
    /// Coalesced records with labels, clauses, scopes and node ids filled in.
    pub records: Vec<CommentRecord>,
    pub roots: Vec<CommentNode>,
    pub structure: FileStructure,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedFile {
    pub fn nodes(&self) -> impl Iterator<Item = &CommentNode> {
        crate::model::walk_forest(&self.roots)
    }

    pub fn labeled(&self) -> impl Iterator<Item = &CommentRecord> {
        self.records.iter().filter(|r| r.label.is_some())
    }
}

/// Extracts, coalesces, labels and scopes the comments of one file and
/// builds its comment forest.
pub fn parse_file(file: &str, source: &str, config: &Config) -> ParsedFile {
    let Extraction {
        records,
        mut diagnostics,
    } = extract_comments(file, source, &config.syntax);
    let structure = FileStructure::analyze(source, &config.syntax);
    let mut records = coalesce(records, source, &config.patterns);
    for rec in &mut records {
        rec.scope = structure.scope_at(rec.range.start);
        match split_label(&rec.body, &config.patterns) {
            Some((label, rest)) => {
                rec.clauses = parse_clauses(rest, &config.patterns);
                rec.label = Some(label);
            }
            None => rec.clauses = parse_clauses(&rec.body, &config.patterns),
        }
    }
    let build = build_tree(file, &mut records, source);
    diagnostics.extend(build.diagnostics);
    ParsedFile {
        file: file.to_string(),
        records,
        roots: build.roots,
        structure,
        diagnostics,
    }
}
