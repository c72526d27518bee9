//! File watching with debounced incremental rescans.

use std::path::PathBuf;
use std::sync::mpsc::{self, RecvTimeoutError, Sender};
use std::sync::{Arc, Mutex, MutexGuard};
use std::thread::JoinHandle;
use std::time::Duration;

use notify::{EventKind, RecursiveMode, Watcher};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Diagnostic;

use super::project::Project;

pub type SharedProject = Arc<Mutex<Project>>;

/// Locks a shared project, recovering from a poisoned lock.
pub fn lock(project: &SharedProject) -> MutexGuard<'_, Project> {
    project.lock().unwrap_or_else(|e| e.into_inner())
}

/// The full diagnostic set after one quiescent burst of changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch {
    pub seq: u64,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WatchBackend {
    /// Native notifications, falling back to polling when unavailable.
    Native,
    Poll,
}

enum Msg {
    Paths(Vec<PathBuf>),
    Refresh,
    Stop,
}

/// Running watcher. Dropping it without [`WatchHandle::stop`] stops the
/// thread without persisting.
pub struct WatchHandle {
    tx: Sender<Msg>,
    thread: Option<JoinHandle<Result<()>>>,
    backend: WatchBackend,
    _watcher: Box<dyn Watcher + Send>,
}

impl WatchHandle {
    /// Backend actually in use.
    pub fn backend(&self) -> WatchBackend {
        self.backend
    }

    /// Requests a batch even if no file changed, e.g. after an
    /// acknowledgement.
    pub fn refresh(&self) {
        let _ = self.tx.send(Msg::Refresh);
    }

    /// Stops watching and persists the baseline with its acknowledgements.
    pub fn stop(mut self) -> Result<()> {
        let _ = self.tx.send(Msg::Stop);
        match self.thread.take().map(JoinHandle::join) {
            Some(Ok(r)) => r,
            Some(Err(_)) => Err(Error::WatchBackendUnavailable("watch thread panicked".into())),
            None => Ok(()),
        }
    }
}

impl Drop for WatchHandle {
    fn drop(&mut self) {
        if self.thread.is_some() {
            let _ = self.tx.send(Msg::Stop);
        }
    }
}

/// Watches the project root. The sink receives the current diagnostic set
/// once at start and again after every burst of edits that changed file
/// content (bursts end after the configured debounce of quiet).
pub fn watch<F>(project: SharedProject, backend: WatchBackend, sink: F) -> Result<WatchHandle>
where
    F: FnMut(&Batch) + Send + 'static,
{
    let (root, cfg) = {
        let p = lock(&project);
        (p.root().to_path_buf(), p.config().watch.clone())
    };
    let (tx, rx) = mpsc::channel();

    let event_tx = tx.clone();
    let handler = move |res: notify::Result<notify::Event>| match res {
        Ok(ev) if !matches!(ev.kind, EventKind::Access(_)) => {
            let _ = event_tx.send(Msg::Paths(ev.paths));
        }
        Ok(_) => {}
        Err(e) => tracing::warn!("watch error: {e}"),
    };

    let (watcher, backend): (Box<dyn Watcher + Send>, WatchBackend) = match backend {
        WatchBackend::Native => match native_watcher(handler.clone(), &root) {
            Ok(w) => (w, WatchBackend::Native),
            Err(e) => {
                tracing::warn!("{e}; falling back to polling every {:?}", cfg.poll_interval());
                (poll_watcher(handler, &root, cfg.poll_interval())?, WatchBackend::Poll)
            }
        },
        WatchBackend::Poll => (poll_watcher(handler, &root, cfg.poll_interval())?, WatchBackend::Poll),
    };

    let debounce = cfg.debounce();
    let thread = std::thread::spawn(move || run(project, rx, debounce, sink));
    Ok(WatchHandle {
        tx,
        thread: Some(thread),
        backend,
        _watcher: watcher,
    })
}

fn native_watcher<H>(handler: H, root: &std::path::Path) -> Result<Box<dyn Watcher + Send>>
where
    H: notify::EventHandler,
{
    let unavailable = |e: notify::Error| Error::WatchBackendUnavailable(e.to_string());
    let mut w = notify::recommended_watcher(handler).map_err(unavailable)?;
    w.watch(root, RecursiveMode::Recursive).map_err(unavailable)?;
    Ok(Box::new(w))
}

fn poll_watcher<H>(handler: H, root: &std::path::Path, interval: Duration) -> Result<Box<dyn Watcher + Send>>
where
    H: notify::EventHandler,
{
    let unavailable = |e: notify::Error| Error::WatchBackendUnavailable(e.to_string());
    let config = notify::Config::default()
        .with_poll_interval(interval)
        .with_compare_contents(true);
    let mut w = notify::PollWatcher::new(handler, config).map_err(unavailable)?;
    w.watch(root, RecursiveMode::Recursive).map_err(unavailable)?;
    Ok(Box::new(w))
}

fn run<F>(project: SharedProject, rx: mpsc::Receiver<Msg>, debounce: Duration, mut sink: F) -> Result<()>
where
    F: FnMut(&Batch),
{
    let mut seq = 0u64;
    let mut emit = |p: &Project, sink: &mut F| {
        match p.diagnostics() {
            Ok(diagnostics) => sink(&Batch { seq, diagnostics }),
            Err(e) => tracing::error!("diff failed: {e}"),
        }
        seq += 1;
    };
    emit(&lock(&project), &mut sink);

    loop {
        let mut paths = Vec::new();
        let mut refresh = false;
        match rx.recv() {
            Ok(Msg::Paths(p)) => paths.extend(p),
            Ok(Msg::Refresh) => refresh = true,
            Ok(Msg::Stop) | Err(_) => break,
        }
        let mut stopping = false;
        loop {
            match rx.recv_timeout(debounce) {
                Ok(Msg::Paths(p)) => paths.extend(p),
                Ok(Msg::Refresh) => refresh = true,
                Ok(Msg::Stop) => {
                    stopping = true;
                    break;
                }
                Err(RecvTimeoutError::Timeout) => break,
                Err(RecvTimeoutError::Disconnected) => {
                    stopping = true;
                    break;
                }
            }
        }
        {
            let mut p = lock(&project);
            paths.retain(|path| !p.is_state_path(path));
            paths.sort();
            paths.dedup();
            let changed = if paths.is_empty() {
                false
            } else {
                p.rescan_paths(&paths).unwrap_or_else(|e| {
                    tracing::error!("rescan failed: {e}");
                    false
                })
            };
            if changed || refresh {
                emit(&p, &mut sink);
            }
        }
        if stopping {
            break;
        }
    }
    lock(&project).persist()
}
