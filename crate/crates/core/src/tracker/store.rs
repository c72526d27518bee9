//! Snapshot persistence under `<root>/.codat/`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{Snapshot, SCHEMA_VERSION};

pub const STATE_DIR: &str = ".codat";
pub const SNAPSHOT_FILE: &str = "snapshot.json";
pub const PREV_SNAPSHOT_FILE: &str = "snapshot.prev.json";

/// Reads and atomically writes the snapshot of one project.
#[derive(Debug, Clone)]
pub struct SnapshotStore {
    dir: PathBuf,
}

impl SnapshotStore {
    pub fn new(project_root: &Path) -> Self {
        Self {
            dir: project_root.join(STATE_DIR),
        }
    }

    pub fn path(&self) -> PathBuf {
        self.dir.join(SNAPSHOT_FILE)
    }

    pub fn prev_path(&self) -> PathBuf {
        self.dir.join(PREV_SNAPSHOT_FILE)
    }

    pub fn exists(&self) -> bool {
        self.path().is_file() || self.prev_path().is_file()
    }

    /// Loads the current snapshot, falling back to the rotated one if the
    /// current file is missing or unreadable.
    pub fn load(&self) -> Result<Snapshot> {
        let main = self.path();
        match read_snapshot(&main) {
            Ok(s) => Ok(s),
            Err(err) => {
                let prev = self.prev_path();
                if !prev.is_file() {
                    return match err {
                        Error::Io { ref source, .. } if source.kind() == std::io::ErrorKind::NotFound => {
                            Err(Error::SnapshotMissing(self.dir.clone()))
                        }
                        other => Err(other),
                    };
                }
                tracing::warn!("{err}; falling back to {}", prev.display());
                read_snapshot(&prev)
            }
        }
    }

    /// Rotates the existing snapshot to `snapshot.prev.json`, then writes
    /// `snapshot` through a temp file and rename. A crash at any point leaves
    /// at least one loadable file.
    pub fn save(&self, snapshot: &Snapshot) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let main = self.path();
        if main.is_file() {
            let bytes = fs::read(&main).map_err(|e| Error::io(&main, e))?;
            write_atomic(&self.dir, &self.prev_path(), &bytes)?;
        }
        let mut json = serde_json::to_vec_pretty(snapshot)?;
        json.push(b'\n');
        write_atomic(&self.dir, &main, &json)
    }
}

fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let snapshot: Snapshot = serde_json::from_str(&text).map_err(|e| Error::CorruptSnapshot {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if snapshot.schema_version != SCHEMA_VERSION {
        return Err(Error::CorruptSnapshot {
            path: path.to_path_buf(),
            message: format!("unsupported schema version {}", snapshot.schema_version),
        });
    }
    Ok(snapshot)
}

fn write_atomic(dir: &Path, target: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(target).map_err(|e| Error::io(target, e.error))?;
    Ok(())
}
