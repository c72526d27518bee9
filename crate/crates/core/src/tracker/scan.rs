//! Project scanning: file discovery, per-file parse + link, snapshot
//! assembly.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::Utc;
use walkdir::WalkDir;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::hash::sha256_hex;
use crate::linker::link_file;
use crate::model::{FileEntry, Snapshot, SCHEMA_VERSION};
use crate::parser::parse_file;

use super::store::SnapshotStore;

/// Canonical string form of a project root, used to match snapshots to
/// scans.
pub fn canonical_root(root: &Path) -> Result<PathBuf> {
    root.canonicalize().map_err(|e| Error::io(root, e))
}

/// Matching source files under `root` as `/`-separated relative paths,
/// sorted. Hidden files and directories are skipped.
pub fn discover_files(root: &Path, config: &Config) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let walker = WalkDir::new(root).follow_links(false).into_iter().filter_entry(|e| {
        e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.')
    });
    for entry in walker {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if entry.file_type().is_file() && config.syntax.matches(entry.path()) {
            if let Some(rel) = relative_path(root, entry.path()) {
                out.push(rel);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `path` relative to `root` with `/` separators, if it lies under `root`.
pub fn relative_path(root: &Path, path: &Path) -> Option<String> {
    let rel = path.strip_prefix(root).ok()?;
    let parts: Vec<String> = rel
        .components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect();
    (!parts.is_empty()).then(|| parts.join("/"))
}

/// Parses and links one file.
pub fn scan_source(file: &str, source: &str, config: &Config) -> FileEntry {
    let parsed = parse_file(file, source, config);
    let (links, link_diags) = link_file(&parsed, source, &config.syntax);
    let mut diagnostics = parsed.diagnostics;
    diagnostics.extend(link_diags);
    FileEntry {
        file_hash: sha256_hex(source),
        records: parsed.records,
        links,
        nodes: parsed.roots,
        diagnostics,
    }
}

pub(crate) fn read_source(root: &Path, file: &str) -> Result<String> {
    let path = root.join(file);
    std::fs::read_to_string(&path).map_err(|e| Error::io(path, e))
}

/// Scans every matching file under `root` without writing anything.
pub fn scan_project(root: &Path, config: &Config) -> Result<Snapshot> {
    let root = canonical_root(root)?;
    let files = discover_files(&root, config)?;
    if files.is_empty() {
        return Err(Error::NoMatchingFiles(root));
    }
    let mut entries = BTreeMap::new();
    for file in files {
        let source = read_source(&root, &file)?;
        let entry = scan_source(&file, &source, config);
        entries.insert(file, entry);
    }
    Ok(Snapshot {
        schema_version: SCHEMA_VERSION,
        project_root: root.to_string_lossy().into_owned(),
        created_at: Utc::now(),
        files: entries,
        acknowledged: Default::default(),
    })
}

/// Scans `root` and stores the result as the new baseline.
pub fn take_snapshot(root: &Path, config: &Config) -> Result<Snapshot> {
    let snapshot = scan_project(root, config)?;
    SnapshotStore::new(Path::new(&snapshot.project_root)).save(&snapshot)?;
    Ok(snapshot)
}
