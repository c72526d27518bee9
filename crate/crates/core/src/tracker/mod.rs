//! Snapshots, drift detection, re-anchoring, acknowledgement and watching.

mod diff;
mod project;
mod reanchor;
mod scan;
mod store;
mod watch;

pub use diff::{acknowledge, diff};
pub use project::Project;
pub use reanchor::{candidates, reanchor, reanchor_all, Candidate};
pub use scan::{discover_files, relative_path, scan_project, scan_source, take_snapshot};
pub use store::{SnapshotStore, PREV_SNAPSHOT_FILE, SNAPSHOT_FILE, STATE_DIR};
pub use watch::{lock, watch, Batch, SharedProject, WatchBackend, WatchHandle};
