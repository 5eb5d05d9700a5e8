//! HTTP session service. Every successful command answers with the full
//! [`SessionView`]; errors carry the engine's error name as `code`.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ndp_core::export::{export_frames, export_latex, export_unicode};
use ndp_core::{list_applicable, EngineError, LineNo, Mode, RuleId, Session};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;
use uuid::Uuid;

use crate::persist::{self, PersistError};
use crate::script::{ApplyStep, StepError};
use crate::wire::{parse_formula, parse_rule, system_profile, ApplicableDto, AxiomDto, InputError, RowDto};

pub const IDLE_LIMIT: Duration = Duration::from_secs(60 * 60);

struct Entry {
    session: Session,
    last_used: Instant,
}

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<Uuid, Arc<Mutex<Entry>>>>>,
}

impl AppState {
    async fn insert(&self, session: Session) -> (Uuid, Arc<Mutex<Entry>>) {
        let id = Uuid::new_v4();
        let entry = Arc::new(Mutex::new(Entry { session, last_used: Instant::now() }));
        self.sessions.lock().await.insert(id, entry.clone());
        (id, entry)
    }

    async fn get(&self, id: &str) -> Result<Arc<Mutex<Entry>>, ApiError> {
        let missing = || ApiError::new(StatusCode::NOT_FOUND, "NoSuchSession", format!("no session `{id}`"));
        let id = Uuid::parse_str(id).map_err(|_| missing())?;
        self.sessions.lock().await.get(&id).cloned().ok_or_else(missing)
    }

    /// Drops sessions idle for longer than `limit`. Returns how many went.
    pub async fn evict_idle(&self, limit: Duration) -> usize {
        let mut sessions = self.sessions.lock().await;
        let before = sessions.len();
        let mut keep = HashMap::new();
        for (id, entry) in sessions.drain() {
            // A session busy with a request is in use, not idle.
            let idle = match entry.try_lock() {
                Ok(e) => e.last_used.elapsed() > limit,
                Err(_) => false,
            };
            if !idle {
                keep.insert(id, entry);
            }
        }
        *sessions = keep;
        before - sessions.len()
    }

    pub async fn is_empty(&self) -> bool {
        self.sessions.lock().await.is_empty()
    }

    pub async fn len(&self) -> usize {
        self.sessions.lock().await.len()
    }
}

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    code: String,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    at: Option<LineNo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    position: Option<usize>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: String) -> Self {
        ApiError { status, code: code.to_string(), message, at: None, position: None }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        ApiError { at: e.at(), ..ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.code(), e.to_string()) }
    }
}

impl From<InputError> for ApiError {
    fn from(e: InputError) -> Self {
        ApiError { position: e.position(), ..ApiError::new(StatusCode::BAD_REQUEST, e.code(), e.to_string()) }
    }
}

impl From<StepError> for ApiError {
    fn from(e: StepError) -> Self {
        match e {
            StepError::Engine(e) => e.into(),
            StepError::Input(e) => e.into(),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", e.body_text())
    }
}

impl From<PersistError> for ApiError {
    fn from(e: PersistError) -> Self {
        match e {
            PersistError::Input(e) => e.into(),
            PersistError::Replay(r) => ApiError {
                at: r.error.at(),
                ..ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "ReplayError", r.to_string())
            },
            other => ApiError::new(StatusCode::BAD_REQUEST, "BadDocument", other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub session_id: String,
    pub system: String,
    pub palette: Vec<String>,
    pub mode: String,
    pub complete: bool,
    pub can_undo: bool,
    pub can_redo: bool,
    pub rows: Vec<RowDto>,
    pub applicable: Vec<ApplicableDto>,
}

impl SessionView {
    pub fn of(id: Uuid, session: &Session) -> Self {
        let st = session.state();
        let applicable = match session.mode() {
            Mode::Editable => list_applicable(st).iter().map(ApplicableDto::from).collect(),
            Mode::Demo => Vec::new(),
        };
        SessionView {
            session_id: id.to_string(),
            system: st.system.name.as_str().to_string(),
            palette: st.palette.iter().map(RuleId::name).collect(),
            mode: match session.mode() {
                Mode::Editable => "editable",
                Mode::Demo => "demo",
            }
            .to_string(),
            complete: st.is_complete(),
            can_undo: session.can_undo(),
            can_redo: session.can_redo(),
            rows: st.render().rows.iter().map(RowDto::from).collect(),
            applicable,
        }
    }
}

type ApiResult = Result<Json<SessionView>, ApiError>;

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CreateRequest {
    #[serde(default)]
    pub premises: Vec<String>,
    pub conclusion: String,
    #[serde(default)]
    pub system: Option<String>,
    #[serde(default)]
    pub axioms: Vec<AxiomDto>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SelectRequest {
    #[serde(default)]
    pub goal: Option<LineNo>,
    #[serde(default)]
    pub resource: Option<LineNo>,
    #[serde(default)]
    pub clear_resource: bool,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApplyArgs {
    #[serde(default)]
    pub side: Option<String>,
    #[serde(default)]
    pub witness: Option<String>,
    #[serde(default)]
    pub line: Option<LineNo>,
    #[serde(default)]
    pub bindings: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApplyRequest {
    pub rule: String,
    #[serde(default)]
    pub goal: Option<LineNo>,
    #[serde(default)]
    pub resource: Option<LineNo>,
    #[serde(default)]
    pub args: ApplyArgs,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaletteRequest {
    pub rule: String,
    pub on: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GotoRequest {
    pub k: usize,
}

#[derive(Deserialize)]
pub struct ExportQuery {
    pub format: String,
}

#[derive(Deserialize)]
pub struct ImportQuery {
    #[serde(default)]
    pub mode: Option<String>,
}

async fn create(State(app): State<AppState>, body: Result<Json<CreateRequest>, JsonRejection>) -> Result<Response, ApiError> {
    let Json(req) = body?;
    let system = system_profile(req.system.as_deref().unwrap_or("NK"), &req.axioms)?;
    let premises = req
        .premises
        .iter()
        .enumerate()
        .map(|(i, p)| parse_formula(p).map_err(|e| InputError::Formula(format!("premise {}", i + 1), e)))
        .collect::<Result<_, _>>()?;
    let conclusion = parse_formula(&req.conclusion).map_err(|e| InputError::Formula("conclusion".into(), e))?;
    let session = Session::new(premises, conclusion, system);
    let view = SessionView::of(Uuid::nil(), &session);
    let (id, _) = app.insert(session).await;
    Ok((StatusCode::CREATED, Json(SessionView { session_id: id.to_string(), ..view })).into_response())
}

async fn import(State(app): State<AppState>, Query(q): Query<ImportQuery>, body: String) -> Result<Response, ApiError> {
    let mode = match q.mode.as_deref() {
        None | Some("editable") => Mode::Editable,
        Some("demo") => Mode::Demo,
        Some(other) => {
            return Err(ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", format!("unknown mode `{other}`")))
        }
    };
    let doc = persist::from_str(&body)?;
    let session = Session::from_document(&doc, mode).map_err(PersistError::from)?;
    let view = SessionView::of(Uuid::nil(), &session);
    let (id, _) = app.insert(session).await;
    Ok((StatusCode::CREATED, Json(SessionView { session_id: id.to_string(), ..view })).into_response())
}

/// Runs `f` on the session with its lock held, then renders the view.
async fn with_session<F>(app: &AppState, id: &str, f: F) -> ApiResult
where
    F: FnOnce(&mut Session) -> Result<(), ApiError>,
{
    let entry = app.get(id).await?;
    let mut entry = entry.lock().await;
    entry.last_used = Instant::now();
    f(&mut entry.session)?;
    Ok(Json(SessionView::of(Uuid::parse_str(id).expect("looked up"), &entry.session)))
}

async fn show(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    with_session(&app, &id, |_| Ok(())).await
}

async fn select(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<SelectRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    with_session(&app, &id, |s| {
        if let Some(g) = req.goal {
            s.select_goal(g)?;
        }
        if req.clear_resource {
            s.clear_resource()?;
        }
        if let Some(r) = req.resource {
            s.select_resource(r)?;
        }
        Ok(())
    })
    .await
}

async fn apply(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<ApplyRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    let step = ApplyStep {
        rule: req.rule,
        goal: req.goal,
        resource: req.resource,
        side: req.args.side,
        witness: req.args.witness,
        line: req.args.line,
        bindings: req.args.bindings,
    };
    with_session(&app, &id, |s| {
        let app = step.to_app(s)?;
        Ok(s.apply(&app)?)
    })
    .await
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    with_session(&app, &id, |s| Ok(s.undo()?)).await
}

async fn redo(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    with_session(&app, &id, |s| Ok(s.redo()?)).await
}

async fn run_magic(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    with_session(&app, &id, |s| s.magic().map(drop).map_err(ApiError::from)).await
}

async fn palette(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<PaletteRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    let rule = parse_rule(&req.rule).map_err(InputError::from)?;
    with_session(&app, &id, |s| Ok(s.set_palette(rule, req.on)?)).await
}

async fn goto(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<GotoRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    with_session(&app, &id, |s| Ok(s.goto(req.k)?)).await
}

async fn take_over(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    with_session(&app, &id, |s| {
        s.take_over();
        Ok(())
    })
    .await
}

#[derive(Serialize)]
struct FramesBody {
    frames: Vec<FrameBody>,
}

#[derive(Serialize)]
struct FrameBody {
    rows: Vec<RowDto>,
}

async fn export(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ExportQuery>,
) -> Result<Response, ApiError> {
    let entry = app.get(&id).await?;
    let mut entry = entry.lock().await;
    entry.last_used = Instant::now();
    let session = &entry.session;
    const TEXT: &str = "text/plain; charset=utf-8";
    const JSON: &str = "application/json";
    let (kind, body) = match q.format.as_str() {
        "latex" => (TEXT, export_latex(&session.state().render())),
        "text" => (TEXT, export_unicode(&session.state().render())),
        "ndp" => (JSON, persist::to_string(&session.to_document())),
        "frames" => {
            let mut doc = session.to_document();
            doc.events.truncate(doc.undo_cursor);
            let seq = export_frames(&doc).map_err(PersistError::from)?;
            let frames = seq
                .frames
                .iter()
                .map(|f| FrameBody { rows: f.rows.iter().map(RowDto::from).collect() })
                .collect();
            (JSON, serde_json::to_string(&FramesBody { frames }).expect("frames serialize"))
        }
        other => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "BadRequest",
                format!("unknown format `{other}` (expected latex, text, frames or ndp)"),
            ))
        }
    };
    Ok(([(header::CONTENT_TYPE, kind)], body).into_response())
}

pub fn router(app: AppState, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create))
        .route("/sessions/import", post(import))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/select", post(select))
        .route("/sessions/{id}/apply", post(apply))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/redo", post(redo))
        .route("/sessions/{id}/magic", post(run_magic))
        .route("/sessions/{id}/palette", post(palette))
        .route("/sessions/{id}/goto", post(goto))
        .route("/sessions/{id}/takeover", post(take_over))
        .route("/sessions/{id}/export", get(export))
        .with_state(app);
    match assets {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

/// Serves on an already bound listener until ctrl-c.
pub async fn serve(listener: tokio::net::TcpListener, assets: Option<PathBuf>) -> std::io::Result<()> {
    let app = AppState::default();
    let sweeper = app.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.evict_idle(IDLE_LIMIT).await;
        }
    });
    axum::serve(listener, router(app, assets))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
