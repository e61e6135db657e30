//! Read-only HTTP facade over a registry snapshot.

use std::path::PathBuf;
use std::sync::Arc;

use arc_swap::ArcSwap;
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use vtt_core::compose::{compose, known_glyphs, ComposeError};
use vtt_core::composer::canonical_id;
use vtt_core::render::{glyph_svg, DEFAULT_SIZE};
use vtt_core::{canonicalize, resolve_glyph, Registry, ResolveError};

use crate::load::{self, LoadError};

/// Shared state: the current registry snapshot and where it came from.
#[derive(Clone)]
pub struct AppState {
    snapshot: Arc<ArcSwap<Registry>>,
    source: Option<PathBuf>,
}

impl AppState {
    pub fn new(registry: Registry) -> Self {
        AppState { snapshot: Arc::new(ArcSwap::from_pointee(registry)), source: None }
    }

    pub fn from_path(path: PathBuf) -> Result<Self, LoadError> {
        let registry = load::load(&path)?;
        Ok(AppState { source: Some(path), ..AppState::new(registry) })
    }

    pub fn registry(&self) -> Arc<Registry> {
        self.snapshot.load_full()
    }

    /// Publishes a new snapshot; requests in flight keep the one they loaded.
    pub fn replace(&self, registry: Registry) {
        self.snapshot.store(Arc::new(registry));
    }

    /// Re-imports the source document. On failure the current snapshot stays.
    pub fn reload(&self) -> Result<(), LoadError> {
        if let Some(path) = &self.source {
            self.replace(load::load(path)?);
        }
        Ok(())
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/radicals", get(radicals))
        .route("/radicals/{id}", get(radical))
        .route("/concepts", get(concepts))
        .route("/glyphs/{file}", get(glyph))
        .route("/compose", post(compose_handler))
        .with_state(state)
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<ComposeError> for ApiError {
    fn from(e: ComposeError) -> Self {
        ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
    }
}

impl From<ResolveError> for ApiError {
    fn from(e: ResolveError) -> Self {
        let status = match e {
            ResolveError::NotFound(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(status, e.to_string())
    }
}

async fn health(State(s): State<AppState>) -> Json<serde_json::Value> {
    let r = s.registry();
    Json(json!({
        "status": "ok",
        "radicals": r.radicals().len(),
        "concepts": r.concepts().len(),
        "bindings": r.bindings().len(),
    }))
}

#[derive(Serialize)]
struct RadicalSummary<'a> {
    id: &'a str,
    name: &'a str,
    family: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    derives_from: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table1_key: Option<&'a str>,
    regions: Vec<&'a str>,
}

async fn radicals(State(s): State<AppState>) -> Json<serde_json::Value> {
    let r = s.registry();
    let list: Vec<RadicalSummary> = r
        .radicals()
        .iter()
        .map(|rad| RadicalSummary {
            id: rad.id.as_str(),
            name: &rad.name,
            family: rad.family.keyword(),
            derives_from: rad.derives_from.as_ref().map(|d| d.as_str()),
            table1_key: rad.table1_key.as_deref(),
            regions: rad.schema.regions.iter().map(|x| x.name.as_str()).collect(),
        })
        .collect();
    Json(serde_json::to_value(list).expect("summaries serialize"))
}

/// The radical as stored, plus the rules that apply to it and the
/// constraint behind each region.
async fn radical(State(s): State<AppState>, Path(id): Path<String>) -> Result<Json<serde_json::Value>, ApiError> {
    let r = s.registry();
    let rad = r
        .radicals()
        .iter()
        .find(|x| x.id.as_str() == id)
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no radical with id `{id}`")))?;
    let rules: Vec<_> = r
        .rules_for(rad)
        .map(|rule| json!({ "id": rule.id.as_str(), "name": rule.name, "requires": rule.requires }))
        .collect();
    let negatable: Vec<_> = rad
        .schema
        .regions
        .iter()
        .map(|reg| {
            let neg = r.constraint(&reg.constraint).is_some_and(|c| c.negatable);
            json!({ "region": reg.name, "negatable": neg })
        })
        .collect();
    Ok(Json(json!({
        "radical": rad,
        "rules": rules,
        "regions": negatable,
        "glyph_id": canonical_id(&vtt_core::Glyph::bare(rad.id.clone()), &r),
    })))
}

#[derive(Deserialize)]
struct ConceptQuery {
    #[serde(default)]
    query: String,
}

/// Case-insensitive substring search over concept ids, names and aliases.
async fn concepts(State(s): State<AppState>, Query(q): Query<ConceptQuery>) -> Json<serde_json::Value> {
    let r = s.registry();
    let needle = q.query.trim().to_lowercase();
    let hits: Vec<_> = r
        .concepts()
        .iter()
        .filter(|c| {
            needle.is_empty()
                || c.id.as_str().contains(&needle)
                || c.name.to_lowercase().contains(&needle)
                || c.aliases.iter().any(|a| a.to_lowercase().contains(&needle))
        })
        .map(|c| {
            let glyphs: Vec<String> = r
                .bindings()
                .iter()
                .filter(|b| b.concept == c.id)
                .map(|b| canonical_id(&canonicalize(&b.glyph, &r), &r))
                .collect();
            json!({ "concept": c, "glyphs": glyphs })
        })
        .collect();
    Json(json!(hits))
}

#[derive(Deserialize)]
struct SizeQuery {
    size: Option<u32>,
}

async fn glyph(
    State(s): State<AppState>,
    Path(file): Path<String>,
    Query(q): Query<SizeQuery>,
) -> Result<Response, ApiError> {
    let id = file
        .strip_suffix(".svg")
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("`{file}` is not an .svg resource")))?;
    let size = q.size.unwrap_or(DEFAULT_SIZE);
    if !(16..=4096).contains(&size) {
        return Err(ComposeError::BadSize.into());
    }
    let r = s.registry();
    let g = match known_glyphs(&r).into_iter().find(|(k, _)| k == id) {
        Some((_, g)) => g,
        None => resolve_glyph(id, &r)?,
    };
    let svg = glyph_svg(&g, &r, size).map_err(|e| ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}

async fn compose_handler(State(s): State<AppState>, body: Bytes) -> Result<Json<serde_json::Value>, ApiError> {
    let req = serde_json::from_slice(&body).map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))?;
    let r = s.registry();
    let resp = compose(&req, &r)?;
    Ok(Json(serde_json::to_value(resp).expect("responses serialize")))
}

/// Serves until interrupted. SIGHUP re-imports the source document.
pub async fn serve(state: AppState, bind: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    #[cfg(unix)]
    {
        let st = state.clone();
        tokio::spawn(async move {
            use tokio::signal::unix::{signal, SignalKind};
            let Ok(mut hup) = signal(SignalKind::hangup()) else { return };
            while hup.recv().await.is_some() {
                match st.reload() {
                    Ok(()) => eprintln!("registry reloaded"),
                    Err(e) => eprintln!("reload failed, keeping current registry: {e}"),
                }
            }
        });
    }
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
