//! Stateless JSON service: `POST /lint`, `POST /fix`, `POST /apply`,
//! `GET /rules`.
//!
//! Request bodies are `{spec, data?, config?}`; `/apply` takes
//! `{spec, actions}`. The spec may be a JSON object or a string holding
//! the spec text (which keeps repeated channel keys intact). `data` is an
//! array of row objects or `{"values": [...]}`; without it the spec's own
//! inline values are profiled, and a remote `url` leaves fields unchecked.

use std::time::Duration;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;
use vizlint_core::{
    default_catalog, profile_dataset, profile_for_spec, serialize_spec, Action, ChartSpec,
    DatasetProfile, FixConfig, Table,
};

use crate::engine::{
    apply_actions, fix_response, lint_report, run_fix, spec_from_value, Context, InputError,
};

pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";
pub const ADDR_VAR: &str = "VIZLINT_ADDR";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone)]
pub struct AppState {
    pub timeout: Duration,
}

impl Default for AppState {
    fn default() -> Self {
        AppState {
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/lint", post(lint))
        .route("/fix", post(fix))
        .route("/apply", post(apply))
        .route("/rules", get(rules))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: json!({"error": message.into()}),
        }
    }
}

impl From<InputError> for ApiError {
    fn from(e: InputError) -> Self {
        let status = match e {
            InputError::Spec(_) | InputError::Action(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        let mut body = json!({"error": e.to_string()});
        if let Some((line, column)) = e.location() {
            body["location"] = json!({"line": line, "column": column});
        }
        ApiError { status, body }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn body_object(bytes: &[u8]) -> Result<serde_json::Map<String, Value>, ApiError> {
    match serde_json::from_slice::<Value>(bytes) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(ApiError::bad_request("request body must be a JSON object")),
        Err(e) => Err(ApiError::bad_request(format!("malformed request body: {e}"))),
    }
}

fn request_spec(body: &serde_json::Map<String, Value>) -> Result<ChartSpec, ApiError> {
    let v = body
        .get("spec")
        .ok_or_else(|| ApiError::bad_request("missing `spec`"))?;
    Ok(spec_from_value(v)?)
}

fn request_profile(
    body: &serde_json::Map<String, Value>,
    spec: &ChartSpec,
) -> Result<Option<DatasetProfile>, ApiError> {
    let rows = match body.get("data") {
        None | Some(Value::Null) => {
            return profile_for_spec(spec, None).map_err(|e| InputError::from(e).into())
        }
        Some(Value::Array(rows)) => rows,
        Some(Value::Object(o)) => match o.get("values") {
            Some(Value::Array(rows)) => rows,
            _ => return Err(ApiError::bad_request("`data` must hold a `values` array")),
        },
        Some(_) => return Err(ApiError::bad_request("`data` must be an array of rows")),
    };
    let table = Table::from_json_rows(rows).map_err(InputError::from)?;
    Ok(Some(profile_dataset(&table).map_err(InputError::from)?))
}

fn request_config(body: &serde_json::Map<String, Value>) -> Result<FixConfig, ApiError> {
    match body.get("config") {
        None | Some(Value::Null) => Ok(FixConfig::default()),
        Some(v) => Ok(FixConfig::from_json(&v.to_string()).map_err(InputError::from)?),
    }
}

/// Runs engine work off the async threads, bounded by the request timeout.
async fn bounded<T: Send + 'static>(
    state: &AppState,
    work: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    match tokio::time::timeout(state.timeout, tokio::task::spawn_blocking(work)).await {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(e)) => Err(ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: json!({"error": format!("engine failure: {e}")}),
        }),
        Err(_) => Err(ApiError {
            status: StatusCode::SERVICE_UNAVAILABLE,
            body: json!({"error": "request timed out"}),
        }),
    }
}

async fn lint(State(state): State<AppState>, bytes: Bytes) -> Result<Json<Value>, ApiError> {
    let body = body_object(&bytes)?;
    let spec = request_spec(&body)?;
    let profile = request_profile(&body, &spec)?;
    let report = bounded(&state, move || lint_report(&spec, &Context::new(profile))).await?;
    Ok(Json(serde_json::to_value(report).expect("reports serialize")))
}

async fn fix(State(state): State<AppState>, bytes: Bytes) -> Result<Json<Value>, ApiError> {
    let body = body_object(&bytes)?;
    let spec = request_spec(&body)?;
    let profile = request_profile(&body, &spec)?;
    let config = request_config(&body)?;
    let response = bounded(&state, move || {
        let ctx = Context {
            catalog: default_catalog(),
            config,
            profile,
        };
        fix_response(&run_fix(&spec, &ctx))
    })
    .await?;
    Ok(Json(serde_json::to_value(response).expect("responses serialize")))
}

async fn apply(State(state): State<AppState>, bytes: Bytes) -> Result<Json<Value>, ApiError> {
    let body = body_object(&bytes)?;
    let spec = request_spec(&body)?;
    let actions: Vec<Action> = match body.get("actions") {
        None | Some(Value::Null) => Vec::new(),
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| ApiError::bad_request(format!("invalid `actions`: {e}")))?,
    };
    let (revised, diff) = bounded(&state, move || apply_actions(&spec, &actions)).await??;
    let revised: Value =
        serde_json::from_str(&serialize_spec(&revised)).expect("serialized specs are valid JSON");
    Ok(Json(json!({"spec": revised, "diff": diff})))
}

async fn rules() -> Json<Value> {
    let cat = default_catalog();
    Json(json!({
        "version": cat.version,
        "rules": cat.rules.iter().map(|r| json!({
            "id": r.id,
            "category": r.category,
            "description": r.description,
            "params": r.head_params,
            "actions": r.actions.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    }))
}

/// Bind address from `VIZLINT_ADDR`, falling back to the default.
pub fn bind_addr() -> String {
    std::env::var(ADDR_VAR).unwrap_or_else(|_| DEFAULT_ADDR.to_string())
}

pub async fn serve(addr: &str, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
