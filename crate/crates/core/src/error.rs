use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("no files matching the configured extensions under {0}")]
    NoMatchingFiles(PathBuf),

    #[error("no snapshot found under {0}; run `codat scan` first")]
    SnapshotMissing(PathBuf),

    #[error("snapshot at {path} is unreadable: {message}")]
    CorruptSnapshot { path: PathBuf, message: String },

    #[error("snapshot belongs to {expected}, scan is of {actual}")]
    ProjectRootMismatch { expected: String, actual: String },

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("node {0} has no stale finding to acknowledge")]
    NothingToAcknowledge(String),

    #[error("invalid node selector `{0}`; expected LABEL@file[:scope]")]
    BadSelector(String),

    #[error("selector `{selector}` matches no node")]
    NoSuchNode { selector: String },

    #[error("selector `{selector}` is ambiguous; candidates: {}", candidates.join(", "))]
    AmbiguousSelector {
        selector: String,
        candidates: Vec<String>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("node {0} has no linked code region")]
    EmptyRegion(String),

    #[error("backend timed out after {0:?}")]
    Timeout(std::time::Duration),

    #[error("transport failure: {0}")]
    TransportFailure(String),

    #[error("no replay fixture for prompt hash {0}")]
    MissingFixture(String),

    #[error("environment variable {0} is not set")]
    MissingApiKey(String),

    #[error("file watching unavailable: {0}")]
    WatchBackendUnavailable(String),

    #[error("patch does not apply: {0}")]
    Patch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
