//! HTTP API over navigator sessions.
//!
//! | route                            | result                          |
//! |----------------------------------|---------------------------------|
//! | `POST /api/sessions`             | 201 `{session_id, state}`       |
//! | `GET /api/sessions/{id}`         | 200 `{state}`                   |
//! | `POST /api/sessions/{id}/answer` | 200 `{state}`, 400, 409         |
//! | `POST /api/sessions/{id}/undo`   | 200 `{state}`, 409 on empty trail |
//! | `POST /api/sessions/{id}/restart`| 200 `{state}`                   |
//! | `GET /api/catalog`               | schema and labels               |
//!
//! Unknown session ids give 404. Errors carry `{"error": message}`.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use infodd_core::{Diagram, NavigatorError, ResultView, Session, View};
use rand::Rng;
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex as AsyncMutex;

pub const DEFAULT_IDLE: Duration = Duration::from_secs(30 * 60);

type SharedSession = Arc<AsyncMutex<Entry>>;

#[derive(Debug)]
struct Entry {
    session: Session<Arc<Diagram>>,
    last_used: Instant,
}

/// Diagrams by catalog name plus the live sessions.
#[derive(Debug, Clone)]
pub struct AppState {
    catalogs: Arc<BTreeMap<String, Arc<Diagram>>>,
    default_catalog: String,
    sessions: Arc<Mutex<HashMap<String, SharedSession>>>,
    idle: Duration,
}

impl AppState {
    pub fn new(name: impl Into<String>, diagram: Diagram) -> Self {
        let name = name.into();
        let mut catalogs = BTreeMap::new();
        catalogs.insert(name.clone(), Arc::new(diagram));
        Self { catalogs: Arc::new(catalogs), default_catalog: name, sessions: Arc::default(), idle: DEFAULT_IDLE }
    }

    pub fn with_idle_timeout(mut self, idle: Duration) -> Self {
        self.idle = idle;
        self
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().expect("session map lock").len()
    }

    /// Drops sessions idle for longer than the timeout. Sessions busy with a
    /// request are kept.
    pub fn sweep(&self, now: Instant) -> usize {
        let mut map = self.sessions.lock().expect("session map lock");
        let before = map.len();
        map.retain(|_, s| match s.try_lock() {
            Ok(entry) => now.saturating_duration_since(entry.last_used) <= self.idle,
            Err(_) => true,
        });
        before - map.len()
    }

    fn lookup(&self, id: &str) -> Result<SharedSession, ApiError> {
        self.sessions
            .lock()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no session `{id}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionDoc {
    pub variable: String,
    pub options: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub product_id: u32,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailDoc {
    pub variable: String,
    pub value: u32,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question: Option<QuestionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultDoc>,
    pub trail: Vec<TrailDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateResponse {
    pub state: StateDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreatedResponse {
    pub session_id: String,
    pub state: StateDoc,
}

#[derive(Debug, Default, Deserialize)]
struct CreateRequest {
    catalog: Option<String>,
}

#[derive(Debug, Deserialize)]
struct AnswerRequest {
    value: i64,
}

pub fn state_doc(session: &Session<Arc<Diagram>>) -> StateDoc {
    let schema = session.diagram().schema();
    let trail = session
        .trail()
        .iter()
        .map(|a| {
            let spec = schema.variable(a.var);
            TrailDoc {
                variable: spec.map_or_else(String::new, |v| v.name().to_owned()),
                value: a.value,
                label: spec.and_then(|v| v.label(a.value)).unwrap_or_default().to_owned(),
            }
        })
        .collect();
    match session.view() {
        View::Question(q) => StateDoc {
            status: "question".into(),
            question: Some(QuestionDoc { variable: q.variable, options: q.options }),
            result: None,
            trail,
        },
        View::Resolved(ResultView::Product { id, label }) => StateDoc {
            status: "resolved".into(),
            question: None,
            result: Some(ResultDoc { product_id: id, label }),
            trail,
        },
        View::Resolved(ResultView::NoMatch) => {
            StateDoc { status: "no_match".into(), question: None, result: None, trail }
        }
    }
}

#[derive(Debug)]
struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(serde_json::json!({ "error": self.1 }))).into_response()
    }
}

impl From<NavigatorError> for ApiError {
    fn from(e: NavigatorError) -> Self {
        let status = match e {
            NavigatorError::ValueOutOfRange { .. } => StatusCode::BAD_REQUEST,
            NavigatorError::Resolved | NavigatorError::EmptyTrail => StatusCode::CONFLICT,
            NavigatorError::Desynchronized => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(StatusCode::BAD_REQUEST, e.body_text())
    }
}

fn new_token() -> String {
    hex::encode(rand::rng().random::<[u8; 16]>())
}

async fn create_session(
    State(app): State<AppState>,
    body: Option<Json<CreateRequest>>,
) -> Result<(StatusCode, Json<CreatedResponse>), ApiError> {
    let name = body.and_then(|Json(b)| b.catalog).unwrap_or_else(|| app.default_catalog.clone());
    let diagram = app
        .catalogs
        .get(&name)
        .cloned()
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no catalog `{name}`")))?;
    let session = Session::new(diagram);
    let state = state_doc(&session);
    let id = new_token();
    let entry = Entry { session, last_used: Instant::now() };
    app.sessions.lock().expect("session map lock").insert(id.clone(), Arc::new(AsyncMutex::new(entry)));
    log::info!("session {id} started on {name}");
    Ok((StatusCode::CREATED, Json(CreatedResponse { session_id: id, state })))
}

/// Runs `op` with the session locked, so requests to one session are
/// applied one at a time.
async fn with_session<F>(app: &AppState, id: &str, op: F) -> Result<Json<StateResponse>, ApiError>
where
    F: FnOnce(&mut Session<Arc<Diagram>>) -> Result<(), ApiError>,
{
    let shared = app.lookup(id)?;
    let mut entry = shared.lock().await;
    if entry.last_used.elapsed() > app.idle {
        drop(entry);
        app.sessions.lock().expect("session map lock").remove(id);
        return Err(ApiError(StatusCode::NOT_FOUND, format!("session `{id}` expired")));
    }
    entry.last_used = Instant::now();
    op(&mut entry.session)?;
    entry.session.audit()?;
    Ok(Json(StateResponse { state: state_doc(&entry.session) }))
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateResponse>, ApiError> {
    with_session(&app, &id, |_| Ok(())).await
}

async fn answer(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<AnswerRequest>, JsonRejection>,
) -> Result<Json<StateResponse>, ApiError> {
    let Json(req) = body?;
    with_session(&app, &id, |s| {
        let value = u32::try_from(req.value)
            .map_err(|_| ApiError(StatusCode::BAD_REQUEST, format!("answer {} is not an option", req.value)))?;
        s.answer(value)?;
        Ok(())
    })
    .await
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateResponse>, ApiError> {
    with_session(&app, &id, |s| {
        s.undo()?;
        Ok(())
    })
    .await
}

async fn restart(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateResponse>, ApiError> {
    with_session(&app, &id, |s| {
        s.restart();
        Ok(())
    })
    .await
}

#[derive(Debug, Serialize)]
struct CatalogVariable<'a> {
    name: &'a str,
    labels: &'a [String],
}

#[derive(Debug, Serialize)]
struct CatalogProduct<'a> {
    id: u32,
    label: &'a str,
}

async fn catalog(State(app): State<AppState>) -> Response {
    let diagram = &app.catalogs[&app.default_catalog];
    let schema = diagram.schema();
    let variables: Vec<_> =
        schema.variables().iter().map(|v| CatalogVariable { name: v.name(), labels: v.value_labels() }).collect();
    let products: Vec<_> =
        schema.output_labels().iter().enumerate().map(|(i, l)| CatalogProduct { id: i as u32, label: l }).collect();
    Json(serde_json::json!({
        "name": app.default_catalog,
        "variables": variables,
        "products": products,
    }))
    .into_response()
}

pub fn router(app: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/answer", post(answer))
        .route("/api/sessions/{id}/undo", post(undo))
        .route("/api/sessions/{id}/restart", post(restart))
        .route("/api/catalog", get(catalog))
        .with_state(app);
    match static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until Ctrl-C, sweeping idle sessions once a minute.
pub async fn serve(addr: SocketAddr, app: AppState, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    let sweeper = app.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            let dropped = sweeper.sweep(Instant::now());
            if dropped > 0 {
                log::info!("expired {dropped} idle sessions");
            }
        }
    });
    axum::serve(listener, router(app, static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
