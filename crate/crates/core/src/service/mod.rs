//! HTTP facade over an [`Engine`].
//!
//! Handlers only parse, delegate and serialize; every number in a response
//! comes from the engine.

mod runs;

use std::collections::HashMap;
use std::future::Future;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Serialize;
use tokio::net::TcpListener;

pub use runs::{RunRegistry, RunStatus, SaRunHandle};

use crate::benchmark::GroupKey;
use crate::engine::{parse_json, to_json, BenchmarkRequest, Engine, EngineError, ErrorBody, ErrorClass, FieldIssue};
use crate::sensitivity::SaConfig;

#[derive(Clone)]
struct AppState {
    engine: Arc<dyn Engine>,
    runs: Arc<RunRegistry>,
}

pub fn router(engine: Arc<dyn Engine>) -> Router {
    let state = AppState { engine, runs: Arc::new(RunRegistry::default()) };
    Router::new()
        .route("/api/v1/benchmark", post(benchmark))
        .route("/api/v1/sensitivity/runs", post(start_run))
        .route("/api/v1/sensitivity/runs/{id}", get(get_run))
        .route("/api/v1/reference-groups", get(reference_group))
        .route("/api/v1/config", get(config))
        .fallback(not_found)
        .with_state(state)
}

/// Serve until `shutdown` resolves, then finish in-flight requests.
pub async fn serve(
    listener: TcpListener,
    engine: Arc<dyn Engine>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(engine)).with_graceful_shutdown(shutdown).await
}

fn json<T: Serialize>(status: StatusCode, body: &T) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], to_json(body)).into_response()
}

fn error(status: StatusCode, code: &str, detail: impl Into<String>, fields: Vec<FieldIssue>) -> Response {
    json(status, &ErrorBody { error: code.to_string(), detail: detail.into(), fields })
}

fn engine_error(e: &EngineError) -> Response {
    let status = match (e.code(), e.class()) {
        ("empty_group", _) => StatusCode::NOT_FOUND,
        (_, ErrorClass::Input) => StatusCode::BAD_REQUEST,
        (_, ErrorClass::Domain) => StatusCode::UNPROCESSABLE_ENTITY,
        (_, ErrorClass::Internal) => StatusCode::INTERNAL_SERVER_ERROR,
    };
    json(status, &e.body())
}

async fn benchmark(State(state): State<AppState>, body: Bytes) -> Response {
    match BenchmarkRequest::from_json(&body).and_then(|r| state.engine.benchmark(&r)) {
        Ok(response) => json(StatusCode::OK, &response),
        Err(e) => engine_error(&e),
    }
}

async fn start_run(State(state): State<AppState>, body: Bytes) -> Response {
    let parsed =
        if body.iter().all(u8::is_ascii_whitespace) { Ok(SaConfig::default()) } else { parse_json::<SaConfig>(&body) };
    let config = match parsed.and_then(|c| c.validate().map(|_| c).map_err(EngineError::from)) {
        Ok(c) => c,
        Err(e) => {
            return json(StatusCode::UNPROCESSABLE_ENTITY, &ErrorBody { error: "invalid_config".into(), ..e.body() })
        }
    };
    let handle = match state.runs.start(config.clone()) {
        Ok(h) => h,
        Err(active) => {
            return error(
                StatusCode::CONFLICT,
                "run_in_progress",
                format!("run {active} holds the execution slot"),
                vec![],
            )
        }
    };
    tracing::info!(run = %handle.id, samples = config.n_samples, "sensitivity run queued");
    let (engine, runs, id) = (Arc::clone(&state.engine), Arc::clone(&state.runs), handle.id.clone());
    tokio::task::spawn_blocking(move || {
        runs.mark_running(&id);
        let outcome = match catch_unwind(AssertUnwindSafe(|| engine.sensitivity(&config))) {
            Ok(Ok(reports)) => Ok(reports),
            Ok(Err(e)) => Err(e.body()),
            Err(_) => Err(EngineError::Internal("sensitivity run panicked".into()).body()),
        };
        tracing::info!(run = %id, ok = outcome.is_ok(), "sensitivity run finished");
        runs.finish(&id, outcome);
    });
    let location = format!("/api/v1/sensitivity/runs/{}", handle.id);
    let mut response = json(StatusCode::ACCEPTED, &handle);
    if let Ok(value) = location.parse() {
        response.headers_mut().insert(header::LOCATION, value);
    }
    response
}

async fn get_run(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.runs.get(&id) {
        Some(handle) => json(StatusCode::OK, &handle),
        None => error(StatusCode::NOT_FOUND, "unknown_run", format!("no sensitivity run with id `{id}`"), vec![]),
    }
}

fn query_param<T: std::str::FromStr<Err = String>>(
    query: &HashMap<String, String>,
    name: &str,
    issues: &mut Vec<FieldIssue>,
) -> Option<T> {
    match query.get(name).map(|v| v.parse::<T>()) {
        Some(Ok(v)) => Some(v),
        Some(Err(message)) => {
            issues.push(FieldIssue { field: name.into(), message });
            None
        }
        None => {
            issues.push(FieldIssue { field: name.into(), message: "required query parameter".into() });
            None
        }
    }
}

async fn reference_group(State(state): State<AppState>, Query(query): Query<HashMap<String, String>>) -> Response {
    let mut issues = Vec::new();
    let municipality = query_param(&query, "municipality", &mut issues);
    let year_band = query_param(&query, "year_band", &mut issues);
    let family_band = query_param(&query, "family_band", &mut issues);
    let (Some(municipality), Some(year_band), Some(family_band)) = (municipality, year_band, family_band) else {
        return engine_error(&EngineError::Invalid(issues));
    };
    match state.engine.reference_group(&GroupKey { municipality, year_band, family_band }) {
        Ok(summary) => json(StatusCode::OK, &summary),
        Err(e) => engine_error(&e),
    }
}

async fn config(State(state): State<AppState>) -> Response {
    json(StatusCode::OK, &state.engine.public_config())
}

async fn not_found() -> Response {
    error(StatusCode::NOT_FOUND, "not_found", "no such endpoint", vec![])
}
