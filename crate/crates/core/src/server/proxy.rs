use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};

use super::{ApiError, AppState};
use crate::prompts::endpoints::SelfInvokeMode;

#[derive(Debug, Clone, Copy)]
pub(super) enum Upstream {
    Completions,
    Images,
}

pub(super) async fn forward(state: &AppState, which: Upstream, body: Bytes) -> Result<Response, ApiError> {
    if state.engine().self_invoke() != SelfInvokeMode::Proxy {
        return Err(ApiError::new(StatusCode::NOT_FOUND, "proxy_disabled", "the proxy is off in inject-key mode"));
    }
    let settings = &state.inner.proxy;
    let Some(key) = settings.api_key.as_deref() else {
        return Err(ApiError::new(
            StatusCode::BAD_GATEWAY,
            "proxy_unconfigured",
            "no SELF_INVOKE_API_KEY configured",
        ));
    };
    let url = match which {
        Upstream::Completions => &settings.chat_url,
        Upstream::Images => &settings.images_url,
    };
    let resp = state
        .inner
        .http
        .post(url)
        .bearer_auth(key)
        .header(header::CONTENT_TYPE, "application/json")
        .body(body)
        .send()
        .await
        .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "provider_error", e.to_string()))?;
    let status = StatusCode::from_u16(resp.status().as_u16()).unwrap_or(StatusCode::BAD_GATEWAY);
    let content_type = resp
        .headers()
        .get(reqwest::header::CONTENT_TYPE)
        .and_then(|v| HeaderValue::from_bytes(v.as_bytes()).ok())
        .unwrap_or(HeaderValue::from_static("application/json"));
    let bytes = resp
        .bytes()
        .await
        .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "provider_error", e.to_string()))?;
    Ok((status, [(header::CONTENT_TYPE, content_type)], bytes).into_response())
}

pub(super) async fn completions(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    forward(&state, Upstream::Completions, body).await
}

pub(super) async fn images(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    forward(&state, Upstream::Images, body).await
}
