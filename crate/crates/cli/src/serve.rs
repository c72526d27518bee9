//! `serve`: the HTTP API behind the browser UI, on top of watch mode.
//!
//! | Method | Path                | Body / result                                |
//! |--------|---------------------|----------------------------------------------|
//! | GET    | `/api/tree`         | comment forest per file with badges          |
//! | GET    | `/api/node/{id}`    | one node with comment and code text          |
//! | GET    | `/api/diagnostics`  | latest batch                                 |
//! | POST   | `/api/ack`          | `{nodeId}` → remaining diagnostics           |
//! | POST   | `/api/check`        | `{nodeId, backend?}` → verdict               |
//! | GET    | `/api/events`       | server-sent `batch` events                   |
//! | GET    | `/ui/*`             | static UI bundle when `--ui-dir` is given    |

use std::collections::HashMap;
use std::convert::Infallible;
use std::io::Write;
use std::sync::{Arc, Mutex, MutexGuard};

use anyhow::Result;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use codat_core::checker::{CheckResult, Checker};
use codat_core::model::{
    AnchorStatus, Clause, CommentNode, Diagnostic, DiagnosticKind, FileEntry, NodeId, Outcome,
    SourceRange,
};
use codat_core::tracker::{self, lock, Batch, Project, SharedProject, WatchHandle};
use codat_core::{Config, Error};
use futures_util::stream::{self, Stream, StreamExt};
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast;

use crate::args::{BackendKind, ServeArgs};
use crate::commands::backend_config;
use crate::exit::Exit;
use crate::report::CheckRow;

struct AppState {
    project: SharedProject,
    config: Config,
    args: ServeArgs,
    latest: Mutex<Batch>,
    events: broadcast::Sender<Batch>,
    /// Flipped on SIGINT so open event streams end and shutdown can finish.
    shutdown: tokio::sync::watch::Sender<bool>,
    watch: Mutex<Option<WatchHandle>>,
    checkers: Mutex<HashMap<BackendKind, Arc<Checker>>>,
    /// Last verdict per node together with the fingerprint it was given for.
    verdicts: Mutex<HashMap<NodeId, (String, Outcome)>>,
}

fn guard<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

type Shared = Arc<AppState>;

pub fn run(args: ServeArgs, config: Config) -> Result<Exit> {
    let project = Arc::new(Mutex::new(Project::open(&args.root, config.clone())?));
    let (events, _) = broadcast::channel(64);
    let state = Arc::new(AppState {
        project: project.clone(),
        config,
        latest: Mutex::new(Batch {
            seq: 0,
            diagnostics: Vec::new(),
        }),
        events,
        shutdown: tokio::sync::watch::Sender::new(false),
        watch: Mutex::new(None),
        checkers: Mutex::new(HashMap::new()),
        verdicts: Mutex::new(HashMap::new()),
        args,
    });

    let sink_state = Arc::downgrade(&state);
    let handle = tracker::watch(project, crate::watch::backend(state.args.poll), move |batch| {
        if let Some(s) = sink_state.upgrade() {
            *guard(&s.latest) = batch.clone();
            let _ = s.events.send(batch.clone());
        }
    })?;
    *guard(&state.watch) = Some(handle);

    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    let served = rt.block_on(serve(state.clone()));
    drop(rt);
    let handle = guard(&state.watch).take();
    let stopped = handle.map_or(Ok(()), WatchHandle::stop);
    drop(state);
    served?;
    stopped?;
    Ok(Exit::Clean)
}

async fn serve(state: Shared) -> Result<()> {
    let addr = format!("{}:{}", state.args.host, state.args.port);
    let listener = tokio::net::TcpListener::bind(&addr).await?;
    let bound = listener.local_addr()?;
    {
        let mut out = std::io::stdout().lock();
        writeln!(out, "listening on http://{bound}")?;
        out.flush()?;
    }
    let app = router(state.clone());
    axum::serve(listener, app)
        .with_graceful_shutdown(async move {
            let _ = tokio::signal::ctrl_c().await;
            state.shutdown.send_replace(true);
        })
        .await?;
    Ok(())
}

fn router(state: Shared) -> Router {
    let mut app = Router::new()
        .route("/api/tree", get(tree))
        .route("/api/node/{id}", get(node))
        .route("/api/diagnostics", get(diagnostics))
        .route("/api/ack", post(ack))
        .route("/api/check", post(check))
        .route("/api/events", get(events));
    if let Some(dir) = &state.args.ui_dir {
        app = app.nest_service("/ui", tower_http::services::ServeDir::new(dir));
    }
    app.with_state(state)
}

struct ApiError {
    status: StatusCode,
    message: String,
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnknownNode(_) | Error::NoSuchNode { .. } => StatusCode::NOT_FOUND,
            Error::NothingToAcknowledge(_) => StatusCode::CONFLICT,
            Error::EmptyRegion(_) => StatusCode::UNPROCESSABLE_ENTITY,
            Error::BadSelector(_) | Error::AmbiguousSelector { .. } | Error::Config(_) => {
                StatusCode::BAD_REQUEST
            }
            Error::MissingApiKey(_)
            | Error::MissingFixture(_)
            | Error::Timeout(_)
            | Error::TransportFailure(_) => StatusCode::BAD_GATEWAY,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = std::result::Result<Json<T>, ApiError>;

fn internal(message: impl ToString) -> ApiError {
    ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
enum Badge {
    Clean,
    Stale,
    Orphaned,
    Broken,
    Inconsistent,
}

#[derive(Debug, Default, Serialize)]
struct Rollup {
    stale: usize,
    orphaned: usize,
    broken: usize,
    inconsistent: usize,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct AnchorView {
    range: SourceRange,
    status: AnchorStatus,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct TreeNode {
    id: NodeId,
    label: String,
    scope: String,
    name: String,
    clauses: Vec<Clause>,
    anchors: Vec<AnchorView>,
    code_ranges: Vec<SourceRange>,
    badge: Badge,
    rollup: Rollup,
    children: Vec<TreeNode>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct FileTree {
    file: String,
    exists: bool,
    nodes: Vec<TreeNode>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct TreeView {
    project_root: String,
    seq: u64,
    files: Vec<FileTree>,
}

struct BadgeSource<'a> {
    diagnostics: &'a [Diagnostic],
    verdicts: &'a HashMap<NodeId, (String, Outcome)>,
}

impl BadgeSource<'_> {
    fn badge(&self, id: &NodeId, entry: &FileEntry) -> Badge {
        let kind = self
            .diagnostics
            .iter()
            .filter(|d| d.node_id.as_ref() == Some(id))
            .map(|d| d.kind)
            .next();
        match kind {
            Some(DiagnosticKind::StaleComment) => return Badge::Stale,
            Some(DiagnosticKind::OrphanedComment) => return Badge::Orphaned,
            Some(DiagnosticKind::BrokenLink) => return Badge::Broken,
            _ => {}
        }
        let fp = entry.link(id).map(|l| l.code_fingerprint.as_str());
        match self.verdicts.get(id) {
            Some((vfp, Outcome::Inconsistent)) if Some(vfp.as_str()) == fp => Badge::Inconsistent,
            _ => Badge::Clean,
        }
    }

    fn view(&self, node: &CommentNode, entry: &FileEntry) -> TreeNode {
        let children: Vec<TreeNode> = node.children.iter().map(|c| self.view(c, entry)).collect();
        let mut rollup = Rollup::default();
        for c in &children {
            rollup.stale += c.rollup.stale + usize::from(c.badge == Badge::Stale);
            rollup.orphaned += c.rollup.orphaned + usize::from(c.badge == Badge::Orphaned);
            rollup.broken += c.rollup.broken + usize::from(c.badge == Badge::Broken);
            rollup.inconsistent += c.rollup.inconsistent + usize::from(c.badge == Badge::Inconsistent);
        }
        TreeNode {
            id: node.id.clone(),
            label: node.label.raw.clone(),
            scope: node.scope.clone(),
            name: node.display_name(),
            clauses: node.clauses.clone(),
            anchors: node
                .anchors
                .iter()
                .map(|a| AnchorView {
                    range: a.range,
                    status: a.status,
                })
                .collect(),
            code_ranges: entry.link(&node.id).map(|l| l.code_ranges.clone()).unwrap_or_default(),
            badge: self.badge(&node.id, entry),
            rollup,
            children,
        }
    }
}

async fn tree(State(s): State<Shared>) -> ApiResult<TreeView> {
    let latest = guard(&s.latest).clone();
    let verdicts = guard(&s.verdicts).clone();
    let p = lock(&s.project);
    let src = BadgeSource {
        diagnostics: &latest.diagnostics,
        verdicts: &verdicts,
    };
    let mut files: Vec<FileTree> = p
        .current()
        .files
        .iter()
        .map(|(file, entry)| FileTree {
            file: file.clone(),
            exists: true,
            nodes: entry.nodes.iter().map(|n| src.view(n, entry)).collect(),
        })
        .collect();
    for (file, entry) in &p.baseline().files {
        if !p.current().files.contains_key(file) {
            files.push(FileTree {
                file: file.clone(),
                exists: false,
                nodes: entry.nodes.iter().map(|n| src.view(n, entry)).collect(),
            });
        }
    }
    files.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(Json(TreeView {
        project_root: p.root().to_string_lossy().into_owned(),
        seq: latest.seq,
        files,
    }))
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct TextSpan {
    range: SourceRange,
    text: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct NodeView {
    file: String,
    node: TreeNode,
    /// Current file text, absent when the file was deleted.
    source: Option<String>,
    comment: Vec<TextSpan>,
    code: Vec<TextSpan>,
    /// Code ranges recorded in the baseline, which differ from `code` when
    /// the node is stale.
    baseline_code_ranges: Vec<SourceRange>,
    diagnostics: Vec<Diagnostic>,
}

async fn node(State(s): State<Shared>, UrlPath(id): UrlPath<String>) -> ApiResult<NodeView> {
    let id = NodeId(id);
    let latest = guard(&s.latest).clone();
    let verdicts = guard(&s.verdicts).clone();
    let p = lock(&s.project);
    let (file, entry, node) = p.find_node(&id).ok_or_else(|| Error::UnknownNode(id.to_string()))?;
    let source = p.read_source(file).ok();
    let span = |r: &SourceRange| TextSpan {
        range: *r,
        text: source
            .as_deref()
            .and_then(|t| t.get(r.start..r.end))
            .unwrap_or_default()
            .to_string(),
    };
    let badges = BadgeSource {
        diagnostics: &latest.diagnostics,
        verdicts: &verdicts,
    };
    let view = NodeView {
        file: file.to_string(),
        node: badges.view(node, entry),
        comment: node.anchors.iter().map(|a| span(&a.range)).collect(),
        code: entry
            .link(&id)
            .map(|l| l.code_ranges.iter().map(span).collect())
            .unwrap_or_default(),
        baseline_code_ranges: p
            .baseline()
            .files
            .get(file)
            .and_then(|e| e.link(&id))
            .map(|l| l.code_ranges.clone())
            .unwrap_or_default(),
        diagnostics: latest
            .diagnostics
            .iter()
            .filter(|d| d.node_id.as_ref() == Some(&id))
            .cloned()
            .collect(),
        source: source.clone(),
    };
    Ok(Json(view))
}

async fn diagnostics(State(s): State<Shared>) -> ApiResult<Batch> {
    Ok(Json(guard(&s.latest).clone()))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct AckRequest {
    node_id: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct AckResponse {
    acknowledged: String,
    diagnostics: Vec<Diagnostic>,
}

async fn ack(State(s): State<Shared>, Json(req): Json<AckRequest>) -> ApiResult<AckResponse> {
    let state = s.clone();
    let id = NodeId(req.node_id);
    let acked = id.to_string();
    let diagnostics = tokio::task::spawn_blocking(move || -> Result<Vec<Diagnostic>, Error> {
        let mut p = lock(&state.project);
        p.acknowledge(&id)?;
        p.diagnostics()
    })
    .await
    .map_err(internal)??;
    if let Some(w) = guard(&s.watch).as_ref() {
        w.refresh();
    }
    Ok(Json(AckResponse {
        acknowledged: acked,
        diagnostics,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CheckRequest {
    node_id: String,
    backend: Option<BackendKind>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckResponse {
    result: CheckRow,
    diagnostic: Option<Diagnostic>,
}

fn checker_for(s: &AppState, kind: BackendKind) -> Result<Arc<Checker>, Error> {
    if let Some(c) = guard(&s.checkers).get(&kind) {
        return Ok(c.clone());
    }
    let mut args = s.args.backend.clone();
    args.backend = kind;
    let cfg = backend_config(&args).map_err(|e| Error::Config(e.to_string()))?;
    let checker = Arc::new(Checker::from_config(&cfg, &s.config)?);
    guard(&s.checkers).insert(kind, checker.clone());
    Ok(checker)
}

async fn check(State(s): State<Shared>, Json(req): Json<CheckRequest>) -> ApiResult<CheckResponse> {
    let state = s.clone();
    let result: CheckResult = tokio::task::spawn_blocking(move || -> Result<CheckResult, Error> {
        let kind = req.backend.unwrap_or(state.args.backend.backend);
        let checker = checker_for(&state, kind)?;
        let snapshot = lock(&state.project).current().clone();
        let r = checker.check_node(&NodeId(req.node_id), &snapshot, &state.config)?;
        if let Some(fp) = snapshot
            .files
            .values()
            .find_map(|e| e.link(&r.node_id))
            .map(|l| l.code_fingerprint.clone())
        {
            guard(&state.verdicts).insert(r.node_id.clone(), (fp, r.verdict.outcome));
        }
        Ok(r)
    })
    .await
    .map_err(internal)??;
    Ok(Json(CheckResponse {
        result: CheckRow::from(&result),
        diagnostic: result.diagnostic,
    }))
}

async fn events(State(s): State<Shared>) -> Sse<impl Stream<Item = Result<Event, Infallible>>> {
    let rx = s.events.subscribe();
    let first = guard(&s.latest).clone();
    let state = s.clone();
    let stream = stream::unfold((Some(first), rx, state), |(pending, mut rx, state)| async move {
        let batch = match pending {
            Some(b) => b,
            None => match rx.recv().await {
                Ok(b) => b,
                // A slow client skipped batches; the latest one supersedes them.
                Err(broadcast::error::RecvError::Lagged(_)) => guard(&state.latest).clone(),
                Err(broadcast::error::RecvError::Closed) => return None,
            },
        };
        let event = Event::default()
            .event("batch")
            .json_data(&batch)
            .unwrap_or_else(|_| Event::default().event("batch"));
        Some((Ok(event), (None, rx, state)))
    });
    let mut shutdown = s.shutdown.subscribe();
    let stop = async move {
        let _ = shutdown.wait_for(|down| *down).await;
    };
    Sse::new(stream.take_until(stop)).keep_alive(KeepAlive::default())
}
