//! HTTP routes over the session store.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use uuid::Uuid;

use relim_problems::{format_problem, Error, Limits, Problem};

use crate::ops::{error_code, execute, render_json, Action, ActionResult, Initial};
use crate::session::{ReplayDiff, Session};
use crate::store::Store;

/// Default wall-clock budget of one engine call.
pub const DEFAULT_DEADLINE: Duration = Duration::from_secs(60);

/// Error body `{code, message, details}` with its status.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    pub details: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError { status, code: code.into(), message: message.into(), details: Value::Null }
    }

    /// The JSON body `{code, message, details}`.
    pub fn body(&self) -> Value {
        json!({ "code": self.code, "message": self.message, "details": self.details })
    }

    fn not_found(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no session {id}"))
    }

    fn storage(message: String) -> ApiError {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "storage", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> ApiError {
        let (status, details) = match &e {
            Error::Syntax { line, column, message } => {
                (StatusCode::UNPROCESSABLE_ENTITY, json!({ "line": line, "column": column, "message": message }))
            }
            Error::Arity { line, expected, found } => {
                (StatusCode::UNPROCESSABLE_ENTITY, json!({ "line": line, "expected": expected, "found": found }))
            }
            Error::Cap { what, cap, partial } => {
                (StatusCode::CONFLICT, json!({ "what": what, "cap": cap, "partial": partial }))
            }
            Error::Deadline { partial } => (StatusCode::CONFLICT, json!({ "partial": partial })),
            _ => (StatusCode::BAD_REQUEST, Value::Null),
        };
        ApiError { status, code: error_code(&e).into(), message: e.to_string(), details }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status, &self.body())
    }
}

fn json_response(status: StatusCode, body: &impl Serialize) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], render_json(body)).into_response()
}

fn parse_body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| {
        let mut err = ApiError::new(StatusCode::BAD_REQUEST, "bad_request", format!("malformed request body: {e}"));
        err.details = json!({ "line": e.line(), "column": e.column() });
        err
    })
}

/// Server settings.
#[derive(Clone, Debug)]
pub struct Config {
    pub store: PathBuf,
    pub limits: Limits,
    /// Used when `limits` has no deadline of its own.
    pub deadline: Duration,
}

/// A session with serialized writers and lock-free readers of the latest value.
struct Slot {
    write: tokio::sync::Mutex<()>,
    current: RwLock<Arc<Session>>,
}

impl Slot {
    fn new(s: Session) -> Arc<Slot> {
        Arc::new(Slot { write: tokio::sync::Mutex::new(()), current: RwLock::new(Arc::new(s)) })
    }

    fn get(&self) -> Arc<Session> {
        self.current.read().expect("session lock").clone()
    }

    fn set(&self, s: Session) {
        *self.current.write().expect("session lock") = Arc::new(s);
    }
}

pub struct AppState {
    store: Store,
    sessions: RwLock<HashMap<Uuid, Arc<Slot>>>,
    limits: Limits,
    deadline: Duration,
    load_warnings: Vec<String>,
}

impl AppState {
    /// Opens the store and loads every readable session.
    pub fn open(config: Config) -> Result<Arc<AppState>, String> {
        let store = Store::open(&config.store)?;
        let (sessions, load_warnings) = store.load_all()?;
        let sessions = sessions.into_iter().map(|s| (s.id, Slot::new(s))).collect();
        Ok(Arc::new(AppState {
            store,
            sessions: RwLock::new(sessions),
            limits: config.limits,
            deadline: config.deadline,
            load_warnings,
        }))
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    /// Files skipped while loading.
    pub fn load_warnings(&self) -> &[String] {
        &self.load_warnings
    }

    /// Fresh limits with the deadline clock started now.
    pub fn request_limits(&self) -> Limits {
        let mut l = self.limits.clone();
        l.started = None;
        if l.deadline_ms.is_none() {
            l.deadline_ms = Some(self.deadline.as_millis() as u64);
        }
        l.started()
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        let uuid = Uuid::parse_str(id).map_err(|_| ApiError::not_found(id))?;
        self.sessions.read().expect("session map").get(&uuid).cloned().ok_or_else(|| ApiError::not_found(id))
    }
}

/// The routes of the service.
pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/actions", post(apply_action))
        .route("/sessions/{id}/seek", post(seek))
        .route("/sessions/{id}/export", get(export))
        .route("/sessions/{id}/replay", get(replay))
        .route("/run", post(run))
        .with_state(state)
}

/// Binds `addr`, reports the bound address through `ready`, and serves until the process ends.
pub async fn serve(config: Config, addr: SocketAddr, ready: impl FnOnce(SocketAddr)) -> Result<(), String> {
    let state = AppState::open(config)?;
    for w in state.load_warnings() {
        tracing::warn!("skipped session file: {w}");
    }
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| format!("{addr}: {e}"))?;
    let local = listener.local_addr().map_err(|e| e.to_string())?;
    ready(local);
    axum::serve(listener, router(state)).await.map_err(|e| e.to_string())
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", format!("worker failed: {e}")))
}

#[derive(Deserialize)]
struct CreateRequest {
    initial: Initial,
    #[serde(default)]
    name: String,
    #[serde(default)]
    notes: String,
}

#[derive(Serialize)]
struct EntryView<'a> {
    index: usize,
    op: Option<&'static str>,
    labels: usize,
    timestamp_ms: u64,
    summary: &'a Value,
}

#[derive(Serialize)]
struct SessionView<'a> {
    id: Uuid,
    name: &'a str,
    notes: &'a str,
    cursor: usize,
    length: usize,
    created_ms: u64,
    updated_ms: u64,
    snapshot: &'a Problem,
    history: Vec<EntryView<'a>>,
}

fn session_view(s: &Session) -> SessionView<'_> {
    SessionView {
        id: s.id,
        name: &s.name,
        notes: &s.notes,
        cursor: s.cursor,
        length: s.history.len(),
        created_ms: s.created_ms,
        updated_ms: s.updated_ms,
        snapshot: s.current(),
        history: s
            .history
            .iter()
            .enumerate()
            .map(|(index, e)| EntryView {
                index,
                op: e.action.as_ref().map(Action::name),
                labels: e.snapshot.label_count(),
                timestamp_ms: e.timestamp_ms,
                summary: &e.summary,
            })
            .collect(),
    }
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = parse_body(&body)?;
    let session = blocking(move || Session::create(req.initial, req.name, req.notes)).await??;
    state.store.save(&session).map_err(ApiError::storage)?;
    let response = json_response(StatusCode::CREATED, &session_view(&session));
    state.sessions.write().expect("session map").insert(session.id, Slot::new(session));
    Ok(response)
}

#[derive(Serialize)]
struct SessionSummary {
    id: Uuid,
    name: String,
    cursor: usize,
    length: usize,
    labels: usize,
    created_ms: u64,
    updated_ms: u64,
}

async fn list_sessions(State(state): State<Arc<AppState>>) -> Response {
    let slots: Vec<Arc<Slot>> = state.sessions.read().expect("session map").values().cloned().collect();
    let mut list: Vec<SessionSummary> = slots
        .iter()
        .map(|slot| {
            let s = slot.get();
            SessionSummary {
                id: s.id,
                name: s.name.clone(),
                cursor: s.cursor,
                length: s.history.len(),
                labels: s.current().label_count(),
                created_ms: s.created_ms,
                updated_ms: s.updated_ms,
            }
        })
        .collect();
    list.sort_by(|a, b| b.updated_ms.cmp(&a.updated_ms).then(b.created_ms.cmp(&a.created_ms)).then(a.id.cmp(&b.id)));
    json_response(StatusCode::OK, &list)
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = state.slot(&id)?.get();
    Ok(json_response(StatusCode::OK, &session_view(&s)))
}

#[derive(Serialize)]
struct ActionResponse<'a> {
    session: Uuid,
    index: usize,
    result: &'a ActionResult,
}

async fn apply_action(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let action: Action = parse_body(&body)?;
    let slot = state.slot(&id)?;
    let _guard = slot.write.lock().await;
    let mut session = (*slot.get()).clone();
    let limits = state.request_limits();
    let (session, result) = blocking(move || {
        let r = session.apply(action, &limits);
        r.map(|r| (session, r))
    })
    .await??;
    // The new state becomes visible only once it is durable.
    state.store.save(&session).map_err(ApiError::storage)?;
    let response = json_response(
        StatusCode::OK,
        &ActionResponse { session: session.id, index: session.cursor, result: &result },
    );
    slot.set(session);
    Ok(response)
}

#[derive(Deserialize)]
struct SeekRequest {
    cursor: usize,
}

async fn seek(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let req: SeekRequest = parse_body(&body)?;
    let slot = state.slot(&id)?;
    let _guard = slot.write.lock().await;
    let mut session = (*slot.get()).clone();
    session.seek(req.cursor)?;
    state.store.save(&session).map_err(ApiError::storage)?;
    let response = json_response(StatusCode::OK, &session_view(&session));
    slot.set(session);
    Ok(response)
}

#[derive(Deserialize)]
struct ExportQuery {
    cursor: Option<usize>,
}

async fn export(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<ExportQuery>,
) -> Result<Response, ApiError> {
    let s = state.slot(&id)?.get();
    let index = q.cursor.unwrap_or(s.cursor);
    let entry = s.history.get(index).ok_or_else(|| {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid", format!("cursor {index} is outside the history"))
    })?;
    Ok((StatusCode::OK, [(header::CONTENT_TYPE, "text/plain; charset=utf-8")], format_problem(&entry.snapshot))
        .into_response())
}

#[derive(Serialize)]
struct ReplayReport {
    ok: bool,
    entries: usize,
    diffs: Vec<ReplayDiff>,
}

async fn replay(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = state.slot(&id)?.get();
    let limits = state.request_limits();
    let entries = s.history.len();
    let diffs = blocking(move || s.replay(&limits)).await??;
    Ok(json_response(StatusCode::OK, &ReplayReport { ok: diffs.is_empty(), entries, diffs }))
}

/// A stateless action on a problem given inline.
#[derive(Deserialize)]
struct RunRequest {
    initial: Initial,
    action: Action,
}

async fn run(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: RunRequest = parse_body(&body)?;
    let limits = state.request_limits();
    let result = blocking(move || {
        let p = req.initial.problem()?;
        execute(&req.action, &p, &limits)
    })
    .await??;
    Ok(json_response(StatusCode::OK, &result))
}
