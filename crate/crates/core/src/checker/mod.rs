//! Comment-versus-code consistency checks through a pluggable backend.

mod backend;
mod prompt;
mod verdict;

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub use backend::{
    Backend, BackendConfig, ConstantBackend, HttpBackend, ReplayBackend, DEFAULT_API_KEY_ENV,
};
pub use prompt::{build_prompt, normalize_prompt, prompt_hash, QUESTION};
pub use verdict::parse_verdict;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::hash::sha256_hex;
use crate::model::{Diagnostic, DiagnosticKind, NodeId, Outcome, Severity, Snapshot, Verdict};
use crate::tracker::scan_source;

/// Result of checking one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub node_id: NodeId,
    pub node: String,
    pub verdict: Verdict,
    /// Present when the verdict is inconsistent.
    pub diagnostic: Option<Diagnostic>,
    pub cached: bool,
}

/// Runs checks against one backend, caching verdicts by node and code
/// fingerprint.
pub struct Checker {
    backend: Box<dyn Backend>,
    cache: Mutex<HashMap<(NodeId, String), Verdict>>,
    calls: AtomicUsize,
    parallelism: usize,
}

impl Checker {
    pub fn new(backend: Box<dyn Backend>, parallelism: usize) -> Self {
        Self {
            backend,
            cache: Mutex::new(HashMap::new()),
            calls: AtomicUsize::new(0),
            parallelism: parallelism.max(1),
        }
    }

    pub fn from_config(backend: &BackendConfig, config: &Config) -> Result<Self> {
        Ok(Self::new(backend.build()?, config.check.parallelism))
    }

    pub fn backend_id(&self) -> &str {
        self.backend.id()
    }

    /// Number of backend calls issued so far.
    pub fn backend_calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    /// Checks `id` against the project files of `snapshot`. If a file
    /// changed since the snapshot was taken, it is re-parsed first.
    pub fn check_node(&self, id: &NodeId, snapshot: &Snapshot, config: &Config) -> Result<CheckResult> {
        let (file, _) = snapshot
            .find_node(id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))?;
        let path = std::path::Path::new(&snapshot.project_root).join(file);
        let source = std::fs::read_to_string(&path).map_err(|e| Error::io(path, e))?;
        let stored = &snapshot.files[file];
        let fresh;
        let entry = if stored.file_hash == sha256_hex(&source) {
            stored
        } else {
            fresh = scan_source(file, &source, config);
            &fresh
        };
        let node = entry
            .all_nodes()
            .find(|n| &n.id == id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))?;
        let link = entry.link(id);
        let name = node.display_name();
        let fingerprint = link
            .map(|l| l.code_fingerprint.clone())
            .ok_or_else(|| Error::EmptyRegion(name.clone()))?;

        let key = (id.clone(), fingerprint);
        let cached = self.lock_cache().get(&key).cloned();
        let (verdict, was_cached) = match cached {
            Some(v) => (v, true),
            None => {
                let prompt = build_prompt(node, link, &source, &config.syntax)?;
                self.calls.fetch_add(1, Ordering::SeqCst);
                let response = self.backend.complete(&prompt)?;
                let verdict = parse_verdict(&response, self.backend.id());
                self.lock_cache().insert(key, verdict.clone());
                (verdict, false)
            }
        };

        let diagnostic = (verdict.outcome == Outcome::Inconsistent).then(|| Diagnostic {
            kind: DiagnosticKind::Inconsistent,
            node_id: Some(id.clone()),
            node: Some(name.clone()),
            file: file.to_string(),
            comment_range: Some(node.first_anchor().range),
            code_ranges: link.map(|l| l.code_ranges.clone()).unwrap_or_default(),
            message: verdict.explanation.clone(),
            severity: Severity::Error,
        });
        Ok(CheckResult {
            node_id: id.clone(),
            node: name,
            verdict,
            diagnostic,
            cached: was_cached,
        })
    }

    /// Checks several nodes, at most `parallelism` at a time. Results keep
    /// the order of `ids`.
    pub fn check_nodes(&self, ids: &[NodeId], snapshot: &Snapshot, config: &Config) -> Vec<Result<CheckResult>> {
        let mut results: Vec<Option<Result<CheckResult>>> = (0..ids.len()).map(|_| None).collect();
        for (chunk_ids, chunk_out) in ids.chunks(self.parallelism).zip(results.chunks_mut(self.parallelism)) {
            std::thread::scope(|s| {
                let handles: Vec<_> = chunk_ids
                    .iter()
                    .map(|id| s.spawn(move || self.check_node(id, snapshot, config)))
                    .collect();
                for (slot, h) in chunk_out.iter_mut().zip(handles) {
                    *slot = Some(h.join().unwrap_or_else(|_| {
                        Err(Error::TransportFailure("check thread panicked".into()))
                    }));
                }
            });
        }
        results.into_iter().flatten().collect()
    }

    fn lock_cache(&self) -> std::sync::MutexGuard<'_, HashMap<(NodeId, String), Verdict>> {
        self.cache.lock().unwrap_or_else(|e| e.into_inner())
    }
}
