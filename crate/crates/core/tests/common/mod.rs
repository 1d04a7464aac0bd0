#![allow(dead_code)]

pub mod projects;
pub mod scenario;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use workbench_core::codegen::CodeRules;
use workbench_core::gateway::{FixtureStore, Gateway, ProviderMode};
use workbench_core::prompts::endpoints::SelfInvokeMode;
use workbench_core::server::{AppState, ProxySettings};
use workbench_core::store::ProjectStore;
use workbench_core::Engine;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn replay_gateway(store: Option<&ProjectStore>) -> Gateway {
    let mut b = Gateway::builder(ProviderMode::Replay).fixtures(FixtureStore::load(fixtures_dir()).unwrap());
    if let Some(s) = store {
        b = b.transcript_root(s.projects_dir());
    }
    b.build().unwrap()
}

pub fn replay_engine(mode: SelfInvokeMode) -> Engine {
    Engine::new(Arc::new(replay_gateway(None)), CodeRules::default(), mode)
}

pub fn app_state(data_dir: &Path, engine: impl FnOnce(&ProjectStore) -> Engine, proxy: ProxySettings) -> AppState {
    let store = ProjectStore::open(data_dir).unwrap();
    let engine = engine(&store);
    AppState::new(store, engine, proxy, None)
}

pub fn replay_state(data_dir: &Path, mode: SelfInvokeMode, key: Option<&str>) -> AppState {
    app_state(
        data_dir,
        |store| Engine::new(Arc::new(replay_gateway(Some(store))), CodeRules::default(), mode),
        ProxySettings {
            api_key: key.map(str::to_string),
            chat_url: "http://127.0.0.1:9/unused".into(),
            images_url: "http://127.0.0.1:9/unused".into(),
        },
    )
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body)
            .unwrap_or_else(|e| panic!("not json ({e}): {}", String::from_utf8_lossy(&self.body)))
    }

    pub fn text(&self) -> String {
        String::from_utf8(self.body.clone()).unwrap()
    }

    pub fn code(&self) -> String {
        self.json()["code"].as_str().unwrap_or_default().to_string()
    }

    #[track_caller]
    pub fn ok(self) -> Self {
        assert!(self.status.is_success(), "{}: {}", self.status, String::from_utf8_lossy(&self.body));
        self
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> Reply {
    let mut req = Request::builder().method(method).uri(uri).header("host", "wb.test:8080");
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(serde_json::to_vec(&v).unwrap())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, headers, body }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    call(app, Method::GET, uri, None).await
}

pub async fn post(app: &Router, uri: &str, body: Value) -> Reply {
    call(app, Method::POST, uri, Some(body)).await
}

pub async fn post_empty(app: &Router, uri: &str) -> Reply {
    call(app, Method::POST, uri, None).await
}

pub async fn put(app: &Router, uri: &str, body: Value) -> Reply {
    call(app, Method::PUT, uri, Some(body)).await
}

/// Every file under `dir`, recursively.
pub fn all_files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap().flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

/// Drives the walkthrough through the HTTP API; returns the project id.
pub async fn http_scenario(app: &Router, name: &str) -> String {
    use scenario::*;
    let id = post(app, "/projects", serde_json::json!({ "name": name })).await.ok().json()["id"]
        .as_str()
        .unwrap()
        .to_string();
    let base = format!("/projects/{id}");
    let cell = |c: &str| format!("{base}/matrix/{c}");
    put(app, &format!("{base}/problem"), serde_json::json!({ "text": PROBLEM })).await.ok();

    let n = |count: usize| serde_json::json!({ "count": count });
    let submit = |c: &str| format!("{}/submit", cell(c));
    post(app, &format!("{}/brainstorm", cell("person/idea")), n(3)).await.ok();
    post(app, &format!("{}/brainstorm", cell("person/idea")), n(3)).await.ok();
    put(app, &submit("person/idea"), serde_json::json!({ "content": PERSON_IDEAS_1[1] })).await.ok();
    post(app, &format!("{}/brainstorm", cell("person/grounding")), n(1)).await.ok();
    put(app, &submit("person/grounding"), serde_json::json!({ "content": person_grounding_text() })).await.ok();

    post(app, &format!("{}/brainstorm", cell("approach/idea")), n(3)).await.ok();
    put(app, &submit("approach/idea"), serde_json::json!({ "content": APPROACH_IDEAS[1] })).await.ok();
    post(app, &format!("{}/brainstorm", cell("approach/grounding")), n(1)).await.ok();
    let story = APPROACH_GROUNDING_STORY.iter().map(|b| format!("- {b}")).collect::<Vec<_>>().join("\n");
    put(app, &submit("approach/grounding"), serde_json::json!({ "content": story })).await.ok();
    post_empty(app, &format!("{}/versions", cell("approach/grounding"))).await.ok();
    put(app, &submit("approach/idea"), serde_json::json!({ "content": APPROACH_IDEAS[0] })).await.ok();
    post(app, &format!("{}/brainstorm", cell("approach/grounding")), n(1)).await.ok();
    put(app, &submit("approach/grounding"), serde_json::json!({ "content": approach_grounding_text() })).await.ok();

    post(app, &format!("{}/brainstorm", cell("interaction/idea")), n(3)).await.ok();
    put(app, &submit("interaction/idea"), serde_json::json!({ "content": INTERACTION_IDEAS[0] })).await.ok();
    post(app, &format!("{}/brainstorm", cell("interaction/grounding")), n(1)).await.ok();
    put(app, &submit("interaction/grounding"), serde_json::json!({ "content": interaction_grounding_text() })).await.ok();

    post_empty(app, &format!("{base}/requirements/identify")).await.ok();
    post_empty(app, &format!("{base}/spec/generate")).await.ok();
    post_empty(app, &format!("{base}/data/generate")).await.ok();
    post_empty(app, &format!("{base}/plan/generate")).await.ok();
    for k in 1..=5 {
        post_empty(app, &format!("{base}/plan/steps/{k}/generate")).await.ok();
        if k == 3 {
            post(app, &format!("{base}/plan/steps/3/iterate"), serde_json::json!({ "problem": ITERATE_PROBLEM }))
                .await
                .ok();
        }
        post_empty(app, &format!("{base}/plan/steps/{k}/approve")).await.ok();
    }
    id
}
