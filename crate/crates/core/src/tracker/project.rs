//! A long-lived session over one project: the stored baseline plus a
//! current scan that is refreshed incrementally.

use std::path::{Path, PathBuf};

use crate::config::Config;
use crate::error::Result;
use crate::hash::sha256_hex;
use crate::model::{CommentNode, Diagnostic, FileEntry, NodeId, Snapshot};

use super::diff::{acknowledge, diff};
use super::scan::{canonical_root, discover_files, read_source, relative_path, scan_project, scan_source};
use super::store::{SnapshotStore, STATE_DIR};

pub struct Project {
    root: PathBuf,
    config: Config,
    store: SnapshotStore,
    baseline: Snapshot,
    current: Snapshot,
}

impl Project {
    /// Loads the stored baseline of `root` and scans the working tree.
    pub fn open(root: &Path, config: Config) -> Result<Self> {
        let root = canonical_root(root)?;
        let store = SnapshotStore::new(&root);
        let baseline = store.load()?;
        let current = scan_project(&root, &config)?;
        Ok(Self {
            root,
            config,
            store,
            baseline,
            current,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn baseline(&self) -> &Snapshot {
        &self.baseline
    }

    pub fn current(&self) -> &Snapshot {
        &self.current
    }

    /// Drift of the working tree against the baseline.
    pub fn diagnostics(&self) -> Result<Vec<Diagnostic>> {
        diff(&self.baseline, &self.current)
    }

    /// Finds a node in the current scan, or in the baseline if it no longer
    /// exists in the working tree.
    pub fn find_node(&self, id: &NodeId) -> Option<(&str, &FileEntry, &CommentNode)> {
        [&self.current, &self.baseline].into_iter().find_map(|snap| {
            snap.files.iter().find_map(|(path, entry)| {
                entry
                    .all_nodes()
                    .find(|n| &n.id == id)
                    .map(|n| (path.as_str(), entry, n))
            })
        })
    }

    /// Current text of a project file.
    pub fn read_source(&self, file: &str) -> Result<String> {
        read_source(&self.root, file)
    }

    pub fn acknowledge(&mut self, id: &NodeId) -> Result<()> {
        acknowledge(id, &mut self.baseline, &self.current)?;
        self.persist()
    }

    /// Re-reads the given paths; returns whether any file content changed.
    /// Directories and paths outside the project are handled by a full
    /// rescan.
    pub fn rescan_paths<P: AsRef<Path>>(&mut self, paths: &[P]) -> Result<bool> {
        let mut changed = false;
        for path in paths {
            let path = path.as_ref();
            let Some(rel) = relative_path(&self.root, path) else {
                return self.rescan_all();
            };
            if rel.split('/').any(|c| c.starts_with('.')) {
                continue;
            }
            if path.is_dir() {
                return self.rescan_all();
            }
            if self.config.syntax.matches(path) {
                changed |= self.rescan_file(&rel)?;
            }
        }
        Ok(changed)
    }

    /// Re-reads every matching file; returns whether any content changed.
    pub fn rescan_all(&mut self) -> Result<bool> {
        let files = discover_files(&self.root, &self.config)?;
        let gone: Vec<String> = self
            .current
            .files
            .keys()
            .filter(|f| files.binary_search(f).is_err())
            .cloned()
            .collect();
        let mut changed = !gone.is_empty();
        for f in gone {
            self.current.files.remove(&f);
        }
        for f in files {
            changed |= self.rescan_file(&f)?;
        }
        Ok(changed)
    }

    fn rescan_file(&mut self, rel: &str) -> Result<bool> {
        let path = self.root.join(rel);
        if !path.is_file() {
            return Ok(self.current.files.remove(rel).is_some());
        }
        let source = match std::fs::read_to_string(&path) {
            Ok(s) => s,
            // Deleted between the check and the read.
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Ok(self.current.files.remove(rel).is_some())
            }
            Err(e) => return Err(crate::error::Error::io(path, e)),
        };
        let hash = sha256_hex(&source);
        if self.current.files.get(rel).is_some_and(|e| e.file_hash == hash) {
            return Ok(false);
        }
        let entry = scan_source(rel, &source, &self.config);
        self.current.files.insert(rel.to_string(), entry);
        Ok(true)
    }

    /// Writes the baseline (with acknowledgements) back to the store.
    pub fn persist(&self) -> Result<()> {
        self.store.save(&self.baseline)
    }

    /// Whether `path` is inside the state directory.
    pub fn is_state_path(&self, path: &Path) -> bool {
        path.starts_with(self.root.join(STATE_DIR))
    }
}
