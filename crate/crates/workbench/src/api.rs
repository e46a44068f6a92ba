//! HTTP service over a shared [`Workspace`].
//!
//! Writes are serialized by a lock and, when the service has a workspace
//! directory, persisted before the lock is released. Readers clone what they
//! need and compute without holding the lock.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use luxforge_core::control::{compare_policies, simulate};
use luxforge_core::generator::{generate_ranked, GeneratorError, LightingDesign};
use luxforge_core::geometry::{validate_room, RoomModel, ValidatedRoom};
use luxforge_core::patterns::{PatternError, PatternLibrary};
use luxforge_core::photometry::illuminance_field;
use luxforge_core::workspace::{EntityKind, Workspace, WorkspaceError};
use luxforge_core::Error;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::documents::{
    CompareRequest, Created, DesignPatch, ErrorBody, GenerateRequest, IlluminanceRequest, IlluminanceResponse,
    Ranking, SimulateRequest, SimulateResponse,
};

pub struct AppState {
    workspace: RwLock<Workspace>,
    dir: Option<PathBuf>,
}

pub type SharedState = Arc<AppState>;

impl AppState {
    /// In-memory only.
    pub fn ephemeral() -> SharedState {
        Arc::new(Self {
            workspace: RwLock::new(Workspace::new()),
            dir: None,
        })
    }

    /// Restores the workspace saved in `dir` (empty if none) and persists
    /// every later change there.
    pub fn open(dir: PathBuf) -> Result<SharedState, WorkspaceError> {
        let workspace = Workspace::restore(&dir)?;
        workspace.save_index(&dir)?;
        Ok(Arc::new(Self {
            workspace: RwLock::new(workspace),
            dir: Some(dir),
        }))
    }

    pub fn snapshot(&self) -> Workspace {
        self.workspace.read().expect("workspace lock").clone()
    }

    fn read<T>(&self, f: impl FnOnce(&Workspace) -> Result<T, Error>) -> Result<T, ApiError> {
        let ws = self.workspace.read().expect("workspace lock");
        f(&ws).map_err(ApiError::from)
    }

    /// Runs a mutation, then saves the entities it reports as touched.
    fn write<T>(
        &self,
        f: impl FnOnce(&mut Workspace) -> Result<(T, Vec<(EntityKind, String)>), Error>,
    ) -> Result<T, ApiError> {
        let mut ws = self.workspace.write().expect("workspace lock");
        let (value, touched) = f(&mut ws)?;
        if let Some(dir) = &self.dir {
            for (kind, id) in &touched {
                ws.save_entity(dir, *kind, id).map_err(Error::from)?;
            }
            ws.save_index(dir).map_err(Error::from)?;
        }
        Ok(value)
    }

    fn design_and_room(&self, id: &str) -> Result<(LightingDesign, ValidatedRoom), ApiError> {
        self.read(|ws| {
            let design = ws.design(id)?.clone();
            let room = ws.validated_room(&design.room)?;
            Ok((design, room))
        })
    }
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    fn malformed(message: String) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error: "MalformedDocument".into(),
                message,
            },
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let no_pattern = |e: &PatternError| matches!(e, PatternError::NoApplicablePattern { .. });
        let status = match &e {
            Error::Workspace(
                WorkspaceError::UnknownRoom(_) | WorkspaceError::UnknownDesign(_) | WorkspaceError::UnknownTrace(_),
            ) => StatusCode::NOT_FOUND,
            Error::Workspace(_) => StatusCode::INTERNAL_SERVER_ERROR,
            Error::Pattern(p) if no_pattern(p) => StatusCode::UNPROCESSABLE_ENTITY,
            Error::Generator(GeneratorError::Pattern(p)) if no_pattern(p) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        Self {
            status,
            body: ErrorBody {
                error: e.name().to_string(),
                message: e.to_string(),
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse<T: DeserializeOwned>(body: &str) -> ApiResult<T> {
    serde_json::from_str(body).map_err(|e| ApiError::malformed(e.to_string()))
}

fn parse_or_default<T: DeserializeOwned + Default>(body: &str) -> ApiResult<T> {
    if body.trim().is_empty() {
        Ok(T::default())
    } else {
        parse(body)
    }
}

fn json<T: Serialize>(value: &T) -> Response {
    Json(value).into_response()
}

pub fn router(state: SharedState) -> Router {
    Router::new()
        .route("/api/rooms", post(create_room))
        .route("/api/rooms/{id}", get(get_room))
        .route("/api/rooms/{id}/designs", post(generate))
        .route("/api/patterns", get(get_patterns))
        .route("/api/designs/{id}", get(get_design).patch(patch_design))
        .route("/api/designs/{id}/illuminance", post(illuminance))
        .route("/api/designs/{id}/simulate", post(simulate_design))
        .route("/api/designs/{id}/compare", post(compare))
        .route("/api/traces/{file}", get(get_trace))
        .with_state(state)
}

async fn create_room(State(state): State<SharedState>, body: String) -> ApiResult<Response> {
    let room: RoomModel = parse(&body)?;
    validate_room(&room).map_err(Error::from)?;
    let id = state.write(|ws| {
        let id = ws.add_room(room)?;
        Ok((id.clone(), vec![(EntityKind::Room, id)]))
    })?;
    Ok(json(&Created { id }))
}

async fn get_room(State(state): State<SharedState>, Path(id): Path<String>) -> ApiResult<Response> {
    let room = state.read(|ws| Ok(ws.room(&id)?.clone()))?;
    Ok(json(&room))
}

async fn get_patterns() -> Response {
    json(&PatternLibrary::default_library())
}

async fn generate(State(state): State<SharedState>, Path(id): Path<String>, body: String) -> ApiResult<Response> {
    let request: GenerateRequest = parse(&body)?;
    let room = state.read(|ws| ws.validated_room(&id))?;
    let mut ranked = generate_ranked(&room, &id, &PatternLibrary::default_library(), request.seed, request.spacing)
        .map_err(Error::from)?;
    state.write(|ws| {
        let mut touched = Vec::new();
        for entry in &mut ranked {
            let design_id = ws.add_design(entry.design.clone())?;
            entry.design.id = design_id.clone();
            touched.push((EntityKind::Design, design_id));
        }
        Ok(((), touched))
    })?;
    Ok(json(&Ranking {
        room: id,
        seed: request.seed,
        designs: ranked,
    }))
}

async fn get_design(State(state): State<SharedState>, Path(id): Path<String>) -> ApiResult<Response> {
    let design = state.read(|ws| Ok(ws.design(&id)?.clone()))?;
    Ok(json(&design))
}

async fn patch_design(State(state): State<SharedState>, Path(id): Path<String>, body: String) -> ApiResult<Response> {
    let patch: DesignPatch = parse(&body)?;
    let design = state.write(|ws| {
        let edited = patch.apply(ws.design(&id)?)?;
        ws.replace_design(&id, edited)?;
        Ok((ws.design(&id)?.clone(), vec![(EntityKind::Design, id.clone())]))
    })?;
    Ok(json(&design))
}

async fn illuminance(State(state): State<SharedState>, Path(id): Path<String>, body: String) -> ApiResult<Response> {
    let request: IlluminanceRequest = parse_or_default(&body)?;
    let (design, room) = state.design_and_room(&id)?;
    let dims = request.dims.unwrap_or_else(|| design.levels());
    let field = illuminance_field(&design.fixtures, &dims, &room, request.spacing, request.workplane_height)
        .map_err(Error::from)?;
    Ok(json(&IlluminanceResponse { design: id, field }))
}

async fn simulate_design(
    State(state): State<SharedState>,
    Path(id): Path<String>,
    body: String,
) -> ApiResult<Response> {
    let request: SimulateRequest = parse(&body)?;
    let (design, room) = state.design_and_room(&id)?;
    let trace = simulate(&design, &room, &request.policy, &request.schedule).map_err(Error::from)?;
    let summary = trace.summary();
    let trace_id = state.write(|ws| {
        let tid = ws.add_trace(trace);
        Ok((tid.clone(), vec![(EntityKind::Trace, tid)]))
    })?;
    Ok(json(&SimulateResponse { trace_id, summary }))
}

async fn compare(State(state): State<SharedState>, Path(id): Path<String>, body: String) -> ApiResult<Response> {
    let request: CompareRequest = parse(&body)?;
    let (design, room) = state.design_and_room(&id)?;
    let report = compare_policies(&design, &room, &request.policies, &request.schedule).map_err(Error::from)?;
    Ok(json(&report))
}

/// `{id}.csv` returns the CSV export, a bare id the JSON trace.
async fn get_trace(State(state): State<SharedState>, Path(file): Path<String>) -> ApiResult<Response> {
    let (id, csv) = match file.strip_suffix(".csv") {
        Some(id) => (id, true),
        None => (file.strip_suffix(".json").unwrap_or(&file), false),
    };
    let trace = state.read(|ws| Ok(ws.trace(id)?.clone()))?;
    Ok(if csv {
        ([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], trace.to_csv()).into_response()
    } else {
        json(&trace)
    })
}

/// Serves until interrupted.
pub async fn serve(state: SharedState, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
