//! HTTP+JSON front end for interactive sessions.

use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use tlg_core::grammar::Grammar;
use tlg_core::session::{Move, NewSession, SessionError, SessionStore};

struct AppState {
    grammar: Option<Grammar>,
    store: Mutex<SessionStore>,
}

type Shared = Arc<AppState>;

pub struct ApiError(StatusCode, String);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::NotFound(_) => ApiError(StatusCode::NOT_FOUND, e.to_string()),
            SessionError::BadRequest(m) => ApiError(StatusCode::BAD_REQUEST, m),
            SessionError::Illegal(m) => ApiError(StatusCode::UNPROCESSABLE_ENTITY, m),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn session_id(text: &str) -> Result<u64, ApiError> {
    text.parse()
        .map_err(|_| ApiError(StatusCode::NOT_FOUND, format!("no session {text}")))
}

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkBody {
    neg: usize,
    pos: usize,
}

async fn create(State(st): State<Shared>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: NewSession = body(&bytes)?;
    let view = st.store.lock().unwrap().create(&req, st.grammar.as_ref())?;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn show(State(st): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let id = session_id(&id)?;
    let store = st.store.lock().unwrap();
    Ok(Json(store.get(id)?.view()).into_response())
}

async fn moves(State(st): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let id = session_id(&id)?;
    let store = st.store.lock().unwrap();
    Ok(Json(json!({ "moves": store.get(id)?.moves() })).into_response())
}

fn apply(st: &AppState, id: u64, m: &Move) -> Result<Response, ApiError> {
    let mut store = st.store.lock().unwrap();
    let s = store.get_mut(id)?;
    s.apply(m)?;
    Ok(Json(s.view()).into_response())
}

async fn link(State(st): State<Shared>, Path(id): Path<String>, bytes: Bytes) -> Result<Response, ApiError> {
    let b: LinkBody = body(&bytes)?;
    apply(&st, session_id(&id)?, &Move::Link { neg: b.neg, pos: b.pos })
}

async fn step(State(st): State<Shared>, Path(id): Path<String>, bytes: Bytes) -> Result<Response, ApiError> {
    let m: Move = body(&bytes)?;
    apply(&st, session_id(&id)?, &m)
}

async fn undo(State(st): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let id = session_id(&id)?;
    let mut store = st.store.lock().unwrap();
    let s = store.get_mut(id)?;
    s.undo()?;
    Ok(Json(s.view()).into_response())
}

/// Routes:
/// `POST /session`, `GET /session/{id}`, `GET /session/{id}/moves`,
/// `POST /session/{id}/link`, `POST /session/{id}/move`, `POST /session/{id}/undo`.
pub fn router(grammar: Option<Grammar>) -> Router {
    let state = Arc::new(AppState {
        grammar,
        store: Mutex::new(SessionStore::new()),
    });
    Router::new()
        .route("/session", post(create))
        .route("/session/{id}", get(show))
        .route("/session/{id}/moves", get(moves))
        .route("/session/{id}/link", post(link))
        .route("/session/{id}/move", post(step))
        .route("/session/{id}/undo", post(undo))
        .with_state(state)
}

pub async fn serve(grammar: Option<Grammar>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(grammar)).await
}
