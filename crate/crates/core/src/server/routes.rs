use axum::extract::{FromRequest, FromRequestParts, Path, Query, Request, State};
use axum::http::request::Parts;
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::proxy;
use super::{ApiError, AppState, MatrixView};
use crate::codegen::{CodeVersion, Plan};
use crate::engine::DEFAULT_BRAINSTORM_COUNT;
use crate::error::Error;
use crate::export::{resolve_preview, ExportMode};
use crate::matrix::{CellKey, Dimension, Level};
use crate::project::{Project, ProjectSummary};
use crate::prompts::endpoints::{serve_rewrite, CANONICAL_ORIGIN};
use crate::scoping::{PlaceholderData, RequirementSet, SpecDoc};

type ApiResult<T> = Result<T, ApiError>;

pub const PREVIEW_CSP: &str = "sandbox allow-scripts allow-forms allow-modals allow-popups; frame-ancestors 'self'";

/// `Json` whose rejection is an [`ApiError`].
pub struct ApiJson<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for ApiJson<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Self(v)),
            Err(e) => Err(ApiError::bad_request(e.body_text())),
        }
    }
}

/// JSON body that may be omitted entirely.
pub struct OptJson<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned + Default> FromRequest<S> for OptJson<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        let bytes = axum::body::Bytes::from_request(req, state)
            .await
            .map_err(|e| ApiError::bad_request(e.body_text()))?;
        if bytes.iter().all(u8::is_ascii_whitespace) {
            return Ok(Self(T::default()));
        }
        serde_json::from_slice(&bytes).map(Self).map_err(|e| ApiError::bad_request(e.to_string()))
    }
}

pub struct ApiPath<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned + Send> FromRequestParts<S> for ApiPath<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        match Path::<T>::from_request_parts(parts, state).await {
            Ok(Path(v)) => Ok(Self(v)),
            Err(e) => Err(ApiError::new(StatusCode::BAD_REQUEST, "invalid_path", e.body_text())),
        }
    }
}

pub struct ApiQuery<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequestParts<S> for ApiQuery<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        match Query::<T>::from_request_parts(parts, state).await {
            Ok(Query(v)) => Ok(Self(v)),
            Err(e) => Err(ApiError::new(StatusCode::BAD_REQUEST, "invalid_query", e.body_text())),
        }
    }
}

fn cell_key(dim: &str, level: &str) -> ApiResult<CellKey> {
    let bad = |m: String| ApiError::new(StatusCode::BAD_REQUEST, "invalid_cell", m);
    Ok(CellKey::new(dim.parse::<Dimension>().map_err(bad)?, level.parse::<Level>().map_err(bad)?))
}

pub fn router(state: AppState) -> Router {
    let open = Router::new()
        .route("/projects/{id}/data", get(get_data).put(edit_data).options(preflight))
        .route("/proxy/completions", post(proxy::completions).options(preflight))
        .route("/proxy/images", post(proxy::images).options(preflight))
        .layer(middleware::from_fn(cors));

    let cell = "/projects/{id}/matrix/{dim}/{level}";
    let step = "/projects/{id}/plan/steps/{k}";
    Router::new()
        .route("/projects", post(create_project).get(list_projects))
        .route("/projects/{id}", get(get_project).delete(delete_project))
        .route("/projects/{id}/clone", post(clone_project))
        .route("/projects/{id}/problem", put(submit_problem))
        .route("/projects/{id}/matrix", get(get_matrix))
        .route(&format!("{cell}/brainstorm"), post(brainstorm))
        .route(&format!("{cell}/iterate"), post(iterate_cell))
        .route(&format!("{cell}/submit"), put(submit_cell))
        .route(&format!("{cell}/versions"), post(save_cell_version))
        .route(&format!("{cell}/versions/{{vid}}/restore"), post(restore_cell_version))
        .route("/projects/{id}/requirements/identify", post(identify_requirements))
        .route("/projects/{id}/requirements", put(set_requirements))
        .route("/projects/{id}/spec/generate", post(generate_spec))
        .route("/projects/{id}/spec", put(edit_spec))
        .route("/projects/{id}/data/generate", post(generate_data))
        .route("/projects/{id}/plan", get(get_plan))
        .route("/projects/{id}/plan/generate", post(generate_plan))
        .route("/projects/{id}/plan/steps", post(add_step))
        .route(step, put(update_step).delete(remove_step))
        .route(&format!("{step}/generate"), post(generate_step))
        .route(&format!("{step}/iterate"), post(iterate_step))
        .route(&format!("{step}/approve"), post(approve_step))
        .route(&format!("{step}/revert"), post(revert_step))
        .route(&format!("{step}/current-version"), put(select_version))
        .route(&format!("{step}/code"), put(manual_edit))
        .route("/projects/{id}/preview", get(preview))
        .route("/projects/{id}/export", get(export))
        .merge(open)
        .with_state(state)
}

fn add_cors_headers(headers: &mut HeaderMap) {
    headers.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, HeaderValue::from_static("*"));
    headers.insert(header::ACCESS_CONTROL_ALLOW_METHODS, HeaderValue::from_static("GET, POST, PUT, OPTIONS"));
    headers.insert(
        header::ACCESS_CONTROL_ALLOW_HEADERS,
        HeaderValue::from_static("Content-Type, Authorization"),
    );
}

async fn cors(req: Request, next: Next) -> Response {
    let mut resp = next.run(req).await;
    add_cors_headers(resp.headers_mut());
    resp
}

async fn preflight() -> StatusCode {
    StatusCode::NO_CONTENT
}

// ---- projects

#[derive(Debug, Deserialize)]
struct NameBody {
    name: String,
}

async fn create_project(State(s): State<AppState>, ApiJson(b): ApiJson<NameBody>) -> ApiResult<(StatusCode, Json<Project>)> {
    let p = s.blocking(move |store| store.create_project(&b.name)).await?;
    Ok((StatusCode::CREATED, Json(p)))
}

async fn list_projects(State(s): State<AppState>) -> ApiResult<Json<Vec<ProjectSummary>>> {
    Ok(Json(s.blocking(|store| store.list_projects()).await?))
}

async fn get_project(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<Json<Project>> {
    Ok(Json(s.blocking(move |store| store.load(&id)).await?))
}

async fn clone_project(
    State(s): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(b): ApiJson<NameBody>,
) -> ApiResult<(StatusCode, Json<Project>)> {
    let p = s.blocking(move |store| store.clone_project(&id, &b.name)).await?;
    Ok((StatusCode::CREATED, Json(p)))
}

async fn delete_project(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<StatusCode> {
    let lock = s.lock_for(&id);
    let _guard = lock.try_lock_owned().map_err(|_| Error::Busy)?;
    let target = id.clone();
    s.blocking(move |store| store.delete_project(&target)).await?;
    s.forget_lock(&id);
    Ok(StatusCode::NO_CONTENT)
}

// ---- matrix

#[derive(Debug, Deserialize)]
struct ProblemBody {
    text: String,
}

async fn submit_problem(
    State(s): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(b): ApiJson<ProblemBody>,
) -> ApiResult<Json<MatrixView>> {
    let view = s
        .mutate(id, move |_, p| {
            p.matrix.submit_problem(&b.text)?;
            Ok(MatrixView::of(&p.matrix))
        })
        .await?;
    Ok(Json(view))
}

async fn get_matrix(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<Json<MatrixView>> {
    let p = s.blocking(move |store| store.load(&id)).await?;
    Ok(Json(MatrixView::of(&p.matrix)))
}

#[derive(Debug, Default, Deserialize)]
struct CountBody {
    count: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct FeedbackBody {
    feedback: String,
    count: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CandidatesResponse {
    pub candidates: Vec<String>,
    pub matrix: MatrixView,
}

async fn brainstorm(
    State(s): State<AppState>,
    ApiPath((id, dim, level)): ApiPath<(String, String, String)>,
    OptJson(b): OptJson<CountBody>,
) -> ApiResult<Json<CandidatesResponse>> {
    let key = cell_key(&dim, &level)?;
    let count = b.count.unwrap_or(DEFAULT_BRAINSTORM_COUNT);
    let out = s
        .mutate(id, move |e, p| {
            let candidates = e.brainstorm(p, key, count)?;
            Ok(CandidatesResponse { candidates, matrix: MatrixView::of(&p.matrix) })
        })
        .await?;
    Ok(Json(out))
}

async fn iterate_cell(
    State(s): State<AppState>,
    ApiPath((id, dim, level)): ApiPath<(String, String, String)>,
    ApiJson(b): ApiJson<FeedbackBody>,
) -> ApiResult<Json<CandidatesResponse>> {
    let key = cell_key(&dim, &level)?;
    let count = b.count.unwrap_or(DEFAULT_BRAINSTORM_COUNT);
    let out = s
        .mutate(id, move |e, p| {
            let candidates = e.iterate_candidates(p, key, &b.feedback, count)?;
            Ok(CandidatesResponse { candidates, matrix: MatrixView::of(&p.matrix) })
        })
        .await?;
    Ok(Json(out))
}

#[derive(Debug, Deserialize)]
struct ContentBody {
    content: String,
}

async fn submit_cell(
    State(s): State<AppState>,
    ApiPath((id, dim, level)): ApiPath<(String, String, String)>,
    ApiJson(b): ApiJson<ContentBody>,
) -> ApiResult<Json<MatrixView>> {
    let key = cell_key(&dim, &level)?;
    let view = s
        .mutate(id, move |_, p| {
            p.matrix.submit_cell(key, &b.content)?;
            Ok(MatrixView::of(&p.matrix))
        })
        .await?;
    Ok(Json(view))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SnapshotCreated {
    pub id: String,
}

async fn save_cell_version(
    State(s): State<AppState>,
    ApiPath((id, dim, level)): ApiPath<(String, String, String)>,
) -> ApiResult<(StatusCode, Json<SnapshotCreated>)> {
    let key = cell_key(&dim, &level)?;
    let id = s.mutate(id, move |_, p| p.matrix.save_cell_version(key)).await?;
    Ok((StatusCode::CREATED, Json(SnapshotCreated { id })))
}

async fn restore_cell_version(
    State(s): State<AppState>,
    ApiPath((id, dim, level, vid)): ApiPath<(String, String, String, String)>,
) -> ApiResult<Json<MatrixView>> {
    let key = cell_key(&dim, &level)?;
    let view = s
        .mutate(id, move |_, p| {
            p.matrix.restore_cell_version(key, &vid)?;
            Ok(MatrixView::of(&p.matrix))
        })
        .await?;
    Ok(Json(view))
}

// ---- scoping

async fn identify_requirements(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<Json<RequirementSet>> {
    Ok(Json(s.mutate(id, |e, p| e.identify_requirements(p).cloned()).await?))
}

#[derive(Debug, Deserialize)]
struct RequirementsBody {
    selected: Vec<String>,
}

async fn set_requirements(
    State(s): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(b): ApiJson<RequirementsBody>,
) -> ApiResult<Json<RequirementSet>> {
    Ok(Json(s.mutate(id, move |_, p| p.set_requirements(&b.selected).cloned()).await?))
}

async fn generate_spec(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<Json<SpecDoc>> {
    Ok(Json(s.mutate(id, |e, p| e.generate_spec(p).cloned()).await?))
}

#[derive(Debug, Deserialize)]
struct SpecBody {
    body: String,
}

async fn edit_spec(
    State(s): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(b): ApiJson<SpecBody>,
) -> ApiResult<Json<SpecDoc>> {
    Ok(Json(s.mutate(id, move |_, p| p.edit_spec(&b.body).cloned()).await?))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DataResponse {
    pub data: PlaceholderData,
    /// Set when code already exists; the data endpoint serves the new data
    /// to every existing version.
    pub warning: Option<String>,
}

fn data_response(p: &Project, data: PlaceholderData) -> DataResponse {
    let warning = p
        .has_code()
        .then(|| "existing code versions will read the new data".to_string());
    DataResponse { data, warning }
}

async fn generate_data(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<Json<DataResponse>> {
    let out = s
        .mutate(id, |e, p| {
            let data = e.generate_data(p)?.clone();
            Ok(data_response(p, data))
        })
        .await?;
    Ok(Json(out))
}

#[derive(Debug, Deserialize)]
struct DataBody {
    raw_text: String,
}

async fn edit_data(
    State(s): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(b): ApiJson<DataBody>,
) -> ApiResult<Json<DataResponse>> {
    let out = s
        .mutate(id, move |_, p| {
            let data = p.edit_data(&b.raw_text)?.clone();
            Ok(data_response(p, data))
        })
        .await?;
    Ok(Json(out))
}

/// The placeholder data exactly as stored.
async fn get_data(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<Response> {
    let p = s.blocking(move |store| store.load(&id)).await?;
    let data = p
        .data
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "no_data", "no placeholder data yet"))?;
    Ok(([(header::CONTENT_TYPE, "application/json; charset=utf-8")], data.raw_text).into_response())
}

// ---- plan and code

async fn get_plan(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<Json<Plan>> {
    let p = s.blocking(move |store| store.load(&id)).await?;
    Ok(Json(p.plan.ok_or(Error::NoPlan)?))
}

async fn generate_plan(State(s): State<AppState>, ApiPath(id): ApiPath<String>) -> ApiResult<Json<Plan>> {
    Ok(Json(s.mutate(id, |e, p| e.generate_plan(p).cloned()).await?))
}

#[derive(Debug, Deserialize)]
struct AddStepBody {
    after: usize,
    description: String,
}

async fn add_step(
    State(s): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(b): ApiJson<AddStepBody>,
) -> ApiResult<Json<Plan>> {
    let plan = s
        .mutate(id, move |_, p| {
            p.plan_mut()?.add_step(b.after, &b.description)?;
            Ok(p.plan()?.clone())
        })
        .await?;
    Ok(Json(plan))
}

#[derive(Debug, Deserialize)]
struct StepBody {
    description: String,
}

async fn update_step(
    State(s): State<AppState>,
    ApiPath((id, k)): ApiPath<(String, usize)>,
    ApiJson(b): ApiJson<StepBody>,
) -> ApiResult<Json<Plan>> {
    let plan = s
        .mutate(id, move |_, p| {
            p.plan_mut()?.update_step(k, &b.description)?;
            Ok(p.plan()?.clone())
        })
        .await?;
    Ok(Json(plan))
}

async fn remove_step(State(s): State<AppState>, ApiPath((id, k)): ApiPath<(String, usize)>) -> ApiResult<Json<Plan>> {
    let plan = s
        .mutate(id, move |_, p| {
            p.plan_mut()?.remove_step(k)?;
            Ok(p.plan()?.clone())
        })
        .await?;
    Ok(Json(plan))
}

async fn generate_step(State(s): State<AppState>, ApiPath((id, k)): ApiPath<(String, usize)>) -> ApiResult<Json<CodeVersion>> {
    Ok(Json(s.mutate(id, move |e, p| e.generate_step_code(p, k)).await?))
}

#[derive(Debug, Deserialize)]
struct IterateStepBody {
    problem: String,
}

async fn iterate_step(
    State(s): State<AppState>,
    ApiPath((id, k)): ApiPath<(String, usize)>,
    ApiJson(b): ApiJson<IterateStepBody>,
) -> ApiResult<Json<CodeVersion>> {
    Ok(Json(s.mutate(id, move |e, p| e.iterate_step(p, k, &b.problem)).await?))
}

async fn approve_step(State(s): State<AppState>, ApiPath((id, k)): ApiPath<(String, usize)>) -> ApiResult<Json<Plan>> {
    let plan = s
        .mutate(id, move |_, p| {
            p.plan_mut()?.approve(k)?;
            Ok(p.plan()?.clone())
        })
        .await?;
    Ok(Json(plan))
}

async fn revert_step(State(s): State<AppState>, ApiPath((id, k)): ApiPath<(String, usize)>) -> ApiResult<Json<Plan>> {
    let plan = s
        .mutate(id, move |_, p| {
            p.plan_mut()?.revert_to(k)?;
            Ok(p.plan()?.clone())
        })
        .await?;
    Ok(Json(plan))
}

#[derive(Debug, Deserialize)]
struct VersionBody {
    version_id: String,
}

async fn select_version(
    State(s): State<AppState>,
    ApiPath((id, k)): ApiPath<(String, usize)>,
    ApiJson(b): ApiJson<VersionBody>,
) -> ApiResult<Json<Plan>> {
    let plan = s
        .mutate(id, move |_, p| {
            p.plan_mut()?.select_version(k, &b.version_id)?;
            Ok(p.plan()?.clone())
        })
        .await?;
    Ok(Json(plan))
}

#[derive(Debug, Deserialize)]
struct CodeBody {
    html: String,
}

async fn manual_edit(
    State(s): State<AppState>,
    ApiPath((id, k)): ApiPath<(String, usize)>,
    ApiJson(b): ApiJson<CodeBody>,
) -> ApiResult<Json<CodeVersion>> {
    Ok(Json(s.mutate(id, move |e, p| e.save_manual_edit(p, k, &b.html)).await?))
}

// ---- preview and export

#[derive(Debug, Default, Deserialize)]
struct VersionQuery {
    step: Option<usize>,
    version: Option<String>,
}

impl AppState {
    fn origin(&self, headers: &HeaderMap) -> String {
        if let Some(o) = &self.inner.public_origin {
            return o.trim_end_matches('/').to_string();
        }
        headers
            .get(header::HOST)
            .and_then(|h| h.to_str().ok())
            .map_or_else(|| CANONICAL_ORIGIN.to_string(), |h| format!("http://{h}"))
    }
}

async fn preview(
    State(s): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiQuery(q): ApiQuery<VersionQuery>,
    headers: HeaderMap,
) -> ApiResult<Response> {
    let p = s.blocking(move |store| store.load(&id)).await?;
    let (_, v) = resolve_preview(&p, q.step, q.version.as_deref())?;
    let engine = s.engine();
    let html = serve_rewrite(
        &v.html,
        &s.origin(&headers),
        &p.id,
        engine.self_invoke(),
        s.inner.proxy.api_key.as_deref(),
    );
    Ok((
        [
            (header::CONTENT_TYPE, "text/html; charset=utf-8"),
            (header::CONTENT_SECURITY_POLICY, PREVIEW_CSP),
            (header::CACHE_CONTROL, "no-store"),
        ],
        html,
    )
        .into_response())
}

#[derive(Debug, Default, Deserialize)]
struct ExportQuery {
    step: Option<usize>,
    version: Option<String>,
    /// `inline` (default) or `server`.
    mode: Option<String>,
    origin: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExportResponse {
    pub path: String,
    pub mode: ExportMode,
}

async fn export(
    State(s): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiQuery(q): ApiQuery<ExportQuery>,
    headers: HeaderMap,
) -> ApiResult<Json<ExportResponse>> {
    let mode = match q.mode.as_deref() {
        None | Some("inline") => ExportMode::Inline,
        Some("server") => ExportMode::Server { origin: q.origin.clone().unwrap_or_else(|| s.origin(&headers)) },
        Some(other) => {
            return Err(ApiError::new(StatusCode::BAD_REQUEST, "invalid_query", format!("unknown export mode {other:?}")))
        }
    };
    let m = mode.clone();
    let path = s
        .blocking(move |store| {
            let p = store.load(&id)?;
            store.export_artifact(&p, q.step, q.version.as_deref(), &m)
        })
        .await?;
    Ok(Json(ExportResponse { path: path.display().to_string(), mode }))
}
