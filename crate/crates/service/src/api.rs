use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use evidiff_core::diff::Side;
use evidiff_core::model::{parse_network, serialize_network};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::session::{LearnRequest, NamedEvidence, SessionError, SessionStore};

pub struct ApiError(SessionError);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(SessionError::BadRequest(e.body_text()))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let e = self.0;
        let status = match &e {
            SessionError::UnknownSession(_) => StatusCode::NOT_FOUND,
            SessionError::ImpossibleEvidence(_) => StatusCode::CONFLICT,
            SessionError::Layout(_) | SessionError::View(_) | SessionError::Inference(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            _ => StatusCode::BAD_REQUEST,
        };
        let mut body = json!({ "error": e.to_string() });
        if let Some(name) = e.offending_name() {
            body["name"] = json!(name);
        }
        if let SessionError::ImpossibleEvidence(side) = &e {
            body["set"] = json!(side.number());
        }
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/network", get(get_network))
        .route("/sessions/{id}/evidence/{side}", put(put_evidence))
        .route("/sessions/{id}/threshold", put(put_threshold))
        .route("/sessions/{id}/diff", get(get_diff))
        .route("/sessions/{id}/scene", get(get_scene))
        .route("/sessions/{id}/scene.svg", get(get_svg))
        .route("/sessions/{id}/cpt/{var}", get(get_cpt))
        .with_state(store)
}

/// The body is either a network document or a learning request (recognized
/// by its `dataset` field).
async fn create_session(State(store): State<Arc<SessionStore>>, body: String) -> ApiResult<Response> {
    let value: Value =
        serde_json::from_str(&body).map_err(|e| SessionError::BadRequest(format!("body is not JSON: {e}")))?;
    let (network, learned) = if value.get("dataset").is_some() {
        let request: LearnRequest =
            serde_json::from_value(value).map_err(|e| SessionError::BadRequest(e.to_string()))?;
        let outcome = request.run()?;
        let summary = json!({ "initialScore": outcome.initial_score, "score": outcome.score, "moves": outcome.moves.len() });
        (outcome.network, Some(summary))
    } else {
        let net = parse_network(&body).map_err(|e| SessionError::BadRequest(e.to_string()))?;
        (net, None)
    };
    let variables = network.len();
    let id = store.create(network)?;
    let mut body = json!({ "id": id.to_string(), "variables": variables });
    if let Some(learned) = learned {
        body["learned"] = learned;
    }
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_network(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<Response> {
    let session = store.get(&id)?;
    let text = serialize_network(session.read().expect("session lock").network());
    Ok(([(header::CONTENT_TYPE, "application/json")], text).into_response())
}

fn parse_side(side: &str) -> Result<Side, SessionError> {
    match side {
        "1" => Ok(Side::First),
        "2" => Ok(Side::Second),
        other => Err(SessionError::BadRequest(format!("evidence set must be 1 or 2, not {other:?}"))),
    }
}

async fn put_evidence(
    State(store): State<Arc<SessionStore>>,
    Path((id, side)): Path<(String, String)>,
    body: Result<Json<NamedEvidence>, JsonRejection>,
) -> ApiResult<Response> {
    let session = store.get(&id)?;
    let side = parse_side(&side)?;
    let Json(named) = body?;
    let mut s = session.write().expect("session lock");
    s.set_evidence(side, &named)?;
    Ok(Json(s.summary()?).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdBody {
    percent: f64,
}

async fn put_threshold(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Result<Json<ThresholdBody>, JsonRejection>,
) -> ApiResult<Response> {
    let session = store.get(&id)?;
    let Json(body) = body?;
    let mut s = session.write().expect("session lock");
    s.set_threshold(body.percent)?;
    Ok(Json(s.summary()?).into_response())
}

async fn get_diff(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<Response> {
    let session = store.get(&id)?;
    let report = session.read().expect("session lock").diff_report()?;
    Ok(Json(report).into_response())
}

async fn get_scene(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<Response> {
    let session = store.get(&id)?;
    let scene = session.read().expect("session lock").scene()?;
    Ok(Json(scene).into_response())
}

async fn get_svg(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<Response> {
    let session = store.get(&id)?;
    let svg = session.read().expect("session lock").svg()?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}

async fn get_cpt(
    State(store): State<Arc<SessionStore>>,
    Path((id, var)): Path<(String, String)>,
) -> ApiResult<Response> {
    let session = store.get(&id)?;
    let panel = session.read().expect("session lock").cpt(&var)?;
    Ok(Json(panel).into_response())
}
