//! Shared domain types.

mod comment;
mod diagnostic;
mod label;
mod range;
mod snapshot;

pub use comment::{
    walk_forest, Anchor, AnchorStatus, Clause, ClauseKeyword, CodeLink, CommentKind, CommentNode,
    CommentRecord, CommentTree, NodeId,
};
pub use diagnostic::{sort_diagnostics, Diagnostic, DiagnosticKind, Outcome, Severity, Verdict};
pub use label::Label;
pub(crate) use label::is_valid_prefix;
pub use range::{LineIndex, SourceRange};
pub use snapshot::{Acknowledgement, FileEntry, Snapshot, SCHEMA_VERSION};
