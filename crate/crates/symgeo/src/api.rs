//! HTTP+JSON sessions over the engine.
//!
//! Each session owns one model. Requests on a session are serialized by its
//! lock; mutations run on a copy that replaces the model only on success, so
//! a failed request leaves the session exactly as it was.

use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use lru::LruCache;
use serde::Deserialize;
use serde_json::{json, Value};
use symgeo_core::cas::Precision;
use symgeo_core::engine::{EngineError, Model};
use symgeo_core::geom::GeomError;
use symgeo_core::loci::LociError;
use tower_http::cors::{Any, CorsLayer};

use crate::curves::curve_doc;
use crate::json::{symbolic_doc, warning_text, ErrorDoc, ModelDoc};
use crate::report::parse_value;

pub const DEFAULT_CAPACITY: usize = 64;
pub const DEFAULT_TTL: Duration = Duration::from_secs(30 * 60);
pub const DEFAULT_SAMPLES: usize = 200;
pub const MAX_SAMPLES: usize = 20_000;

struct Session {
    model: Model,
    last_access: Instant,
}

type Shared = Arc<tokio::sync::Mutex<Session>>;

pub struct AppState {
    sessions: Mutex<LruCache<String, Shared>>,
    ttl: Duration,
    precision: Precision,
}

impl AppState {
    pub fn new(capacity: usize, ttl: Duration, precision: Precision) -> Arc<Self> {
        let cap = NonZeroUsize::new(capacity.max(1)).unwrap();
        Arc::new(AppState {
            sessions: Mutex::new(LruCache::new(cap)),
            ttl,
            precision,
        })
    }

    /// Looks a session up, dropping every session idle for longer than the TTL.
    async fn session(&self, id: &str) -> Result<Shared, ApiError> {
        let s = {
            let mut map = self.sessions.lock().unwrap();
            let expired: Vec<String> = map
                .iter()
                .filter(|(_, s)| s.try_lock().is_ok_and(|s| s.last_access.elapsed() > self.ttl))
                .map(|(k, _)| k.clone())
                .collect();
            for k in expired {
                map.pop(&k);
            }
            map.get(id).cloned()
        };
        s.ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "UnknownSession", format!("no session `{id}`")))
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: String) -> Self {
        ApiError {
            status,
            body: json!({ "error": code, "message": message }),
        }
    }

    fn engine(e: &EngineError, mutation: bool) -> Self {
        let status = match e {
            EngineError::Parse(_) => StatusCode::BAD_REQUEST,
            EngineError::UnknownQuery(_) => StatusCode::NOT_FOUND,
            EngineError::Loci(LociError::TooFewSamples(_)) => StatusCode::BAD_REQUEST,
            EngineError::Geom {
                error: GeomError::UnknownName(_),
                ..
            } if mutation => StatusCode::BAD_REQUEST,
            EngineError::Geom {
                error: GeomError::RangeError { .. } | GeomError::WitnessSingular(_),
                ..
            } if mutation => StatusCode::CONFLICT,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError {
            status,
            body: serde_json::to_value(ErrorDoc::from(e)).unwrap(),
        }
    }

    fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message.into())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

async fn create(State(st): State<Arc<AppState>>, body: String) -> ApiResult<(StatusCode, Json<ModelDoc>)> {
    if body.trim().is_empty() {
        return Err(ApiError::bad_request(
            "EmptyBody",
            "the request body must be a model source",
        ));
    }
    let precision = st.precision;
    let model = blocking(move || Model::build_with("model", &body, precision))
        .await?
        .map_err(|e| ApiError::engine(&e, false))?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let mut doc = ModelDoc::new(&model);
    doc.id = Some(id.clone());
    let session = Session {
        model,
        last_access: Instant::now(),
    };
    st.sessions
        .lock()
        .unwrap()
        .put(id, Arc::new(tokio::sync::Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(doc)))
}

async fn show(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<ModelDoc>> {
    let s = st.session(&id).await?;
    let mut s = s.lock().await;
    s.last_access = Instant::now();
    let mut doc = ModelDoc::new(&s.model);
    doc.id = Some(id);
    Ok(Json(doc))
}

fn assignments(body: &[u8]) -> ApiResult<Vec<(String, f64)>> {
    let v: Value = serde_json::from_slice(body).map_err(|e| ApiError::bad_request("BadJson", e.to_string()))?;
    let Value::Object(map) = v else {
        return Err(ApiError::bad_request(
            "BadJson",
            "expected an object of name: value pairs",
        ));
    };
    map.into_iter()
        .map(|(k, v)| {
            let x = match &v {
                Value::Number(n) => n.as_f64().filter(|x| x.is_finite()),
                Value::String(s) => parse_value(s).ok(),
                _ => None,
            };
            x.map(|x| (k.clone(), x))
                .ok_or_else(|| ApiError::bad_request("BadValue", format!("`{k}`: {v} is not a finite number")))
        })
        .collect()
}

async fn set_indeterminates(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let values = assignments(&body)?;
    let s = st.session(&id).await?;
    let mut s = s.lock().await;
    s.last_access = Instant::now();
    let mut next = s.model.clone();
    let (next, warnings) = blocking(move || {
        let refs: Vec<(&str, f64)> = values.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let w = next.set_witnesses(&refs);
        (next, w)
    })
    .await?;
    let warnings = warnings.map_err(|e| ApiError::engine(&e, true))?;
    s.model = next;
    let doc = ModelDoc::new(&s.model);
    Ok(Json(json!({
        "scene": doc.scene,
        "measurements": doc.measurements,
        "warnings": warnings.iter().map(warning_text).collect::<Vec<_>>(),
    })))
}

async fn symbolic(
    State(st): State<Arc<AppState>>,
    Path((id, query)): Path<(String, String)>,
) -> ApiResult<Json<Value>> {
    let s = st.session(&id).await?;
    let mut s = s.lock().await;
    s.last_access = Instant::now();
    let doc = symbolic_doc(&s.model, &query).map_err(|e| ApiError::engine(&e, false))?;
    Ok(Json(serde_json::to_value(doc).unwrap()))
}

#[derive(Debug, Deserialize)]
struct CurveParams {
    samples: Option<usize>,
    implicit: Option<bool>,
}

async fn curve(
    State(st): State<Arc<AppState>>,
    Path((id, query)): Path<(String, String)>,
    Query(p): Query<CurveParams>,
) -> ApiResult<Json<Value>> {
    let samples = p.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples > MAX_SAMPLES {
        return Err(ApiError::bad_request(
            "TooManySamples",
            format!("at most {MAX_SAMPLES} samples, got {samples}"),
        ));
    }
    let implicit = p.implicit.unwrap_or(true);
    let s = st.session(&id).await?;
    let mut s = s.lock().await;
    s.last_access = Instant::now();
    let model = s.model.clone();
    let doc = blocking(move || curve_doc(&model, &query, samples, implicit))
        .await?
        .map_err(|e| ApiError::engine(&e, false))?;
    Ok(Json(serde_json::to_value(doc).unwrap()))
}

pub fn router(state: Arc<AppState>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST, Method::PATCH, Method::OPTIONS])
        .allow_headers(Any);
    Router::new()
        .route("/health", get(health))
        .route("/models", post(create))
        .route("/models/:id", get(show))
        .route("/models/:id/indeterminates", patch(set_indeterminates))
        .route("/models/:id/symbolic/:query", get(symbolic))
        .route("/models/:id/curves/:query", get(curve))
        .layer(cors)
        .with_state(state)
}

/// Serves until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, state: Arc<AppState>) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
