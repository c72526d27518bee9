use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NodeId, SourceRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiagnosticKind {
    StaleComment,
    OrphanedComment,
    BrokenLink,
    Inconsistent,
    GrammarViolation,
}

impl DiagnosticKind {
    /// Kinds that make `codat diff` exit with status 3.
    pub fn is_drift(self) -> bool {
        matches!(
            self,
            DiagnosticKind::StaleComment | DiagnosticKind::OrphanedComment | DiagnosticKind::BrokenLink
        )
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_id: Option<NodeId>,
    /// Label and scope of the node, e.g. `CS1@Query.addDoc`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment_range: Option<SourceRange>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub code_ranges: Vec<SourceRange>,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    pub fn grammar(file: &str, range: Option<SourceRange>, message: impl Into<String>) -> Self {
        Diagnostic {
            kind: DiagnosticKind::GrammarViolation,
            node_id: None,
            node: None,
            file: file.to_string(),
            comment_range: range,
            code_ranges: Vec::new(),
            message: message.into(),
            severity: Severity::Warning,
        }
    }

    pub(crate) fn sort_key(&self) -> (&str, usize, DiagnosticKind) {
        (
            self.file.as_str(),
            self.comment_range.map_or(0, |r| r.start),
            self.kind,
        )
    }
}

/// Sorts by (file, comment range start).
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Outcome {
    Consistent,
    Inconsistent,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Consistent => "consistent",
            Outcome::Inconsistent => "inconsistent",
            Outcome::Unknown => "unknown",
        })
    }
}

/// Classified result of a consistency check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub outcome: Outcome,
    pub explanation: String,
    pub backend_id: String,
}
