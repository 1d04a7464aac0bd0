//! HTTP JSON API, preview server, data endpoint and self-invocation proxy.

mod error;
mod proxy;
mod routes;
mod views;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::Router;
use tokio::net::TcpListener;

use crate::codegen::CodeRules;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::gateway::{
    AnthropicMessages, FixtureStore, Gateway, GatewayLimits, LiveProviderConfig, OpenAiChat, ProviderMode,
};
use crate::project::Project;
use crate::prompts::endpoints::SelfInvokeMode;
use crate::prompts::fewshot::{UPSTREAM_CHAT_URL, UPSTREAM_IMAGES_URL};
use crate::store::ProjectStore;

pub use error::{status_for, ApiError};
pub use views::{CellView, ContextEntry, MatrixView};

/// Credentials read from the environment. Held in memory only.
#[derive(Clone, Default)]
pub struct Secrets {
    pub ideation_api_key: Option<String>,
    pub codegen_api_key: Option<String>,
    pub self_invoke_api_key: Option<String>,
}

impl std::fmt::Debug for Secrets {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = |k: &Option<String>| if k.is_some() { "<set>" } else { "<unset>" };
        f.debug_struct("Secrets")
            .field("ideation_api_key", &mark(&self.ideation_api_key))
            .field("codegen_api_key", &mark(&self.codegen_api_key))
            .field("self_invoke_api_key", &mark(&self.self_invoke_api_key))
            .finish()
    }
}

impl Secrets {
    pub fn from_env() -> Self {
        let get = |name| std::env::var(name).ok().filter(|v: &String| !v.is_empty());
        Self {
            ideation_api_key: get("IDEATION_API_KEY"),
            codegen_api_key: get("CODEGEN_API_KEY"),
            self_invoke_api_key: get("SELF_INVOKE_API_KEY"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub port: u16,
    pub data_dir: PathBuf,
    pub provider_mode: ProviderMode,
    pub fixtures: Option<PathBuf>,
    pub ideation_model: String,
    pub codegen_model: String,
    pub ideation_base_url: String,
    pub codegen_base_url: String,
    pub provider_timeout: Duration,
    pub self_invoke: SelfInvokeMode,
    pub self_invoke_chat_url: String,
    pub self_invoke_images_url: String,
    /// Origin written into previews; taken from the Host header when unset.
    pub public_origin: Option<String>,
    pub limits: GatewayLimits,
    pub code_rules: CodeRules,
    pub secrets: Secrets,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            port: 8080,
            data_dir: PathBuf::from("workbench-data"),
            provider_mode: ProviderMode::Live,
            fixtures: None,
            ideation_model: "gpt-4o".into(),
            codegen_model: "claude-3-5-sonnet-20240620".into(),
            ideation_base_url: "https://api.openai.com/v1".into(),
            codegen_base_url: "https://api.anthropic.com/v1".into(),
            provider_timeout: Duration::from_secs(300),
            self_invoke: SelfInvokeMode::Proxy,
            self_invoke_chat_url: UPSTREAM_CHAT_URL.into(),
            self_invoke_images_url: UPSTREAM_IMAGES_URL.into(),
            public_origin: None,
            limits: GatewayLimits::default(),
            code_rules: CodeRules::default(),
            secrets: Secrets::default(),
        }
    }
}

impl ServerConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.provider_mode == ProviderMode::Replay && self.fixtures.is_none() {
            return Err("replay mode needs --fixtures".into());
        }
        if self.self_invoke == SelfInvokeMode::InjectKey && self.secrets.self_invoke_api_key.is_none() {
            return Err("inject-key mode needs SELF_INVOKE_API_KEY".into());
        }
        if matches!(self.provider_mode, ProviderMode::Live | ProviderMode::Record) {
            if self.secrets.ideation_api_key.is_none() {
                return Err("live and record modes need IDEATION_API_KEY".into());
            }
            if self.secrets.codegen_api_key.is_none() {
                return Err("live and record modes need CODEGEN_API_KEY".into());
            }
        }
        self.code_rules.validate()
    }

    fn live(&self, base_url: &str, key: &Option<String>, model: &str) -> LiveProviderConfig {
        LiveProviderConfig {
            base_url: base_url.to_string(),
            api_key: key.clone().unwrap_or_default(),
            model: model.to_string(),
            timeout: self.provider_timeout,
            retries: 1,
        }
    }

    /// Builds the gateway. Live providers hold blocking HTTP clients, so call
    /// this outside any async runtime.
    pub fn build_gateway(&self, store: &ProjectStore) -> std::result::Result<Gateway, String> {
        let mut builder = Gateway::builder(self.provider_mode)
            .limits(self.limits)
            .transcript_root(store.projects_dir());
        match self.provider_mode {
            ProviderMode::Replay => {
                let path = self.fixtures.as_ref().ok_or("replay mode needs --fixtures")?;
                let fixtures = FixtureStore::load(path).map_err(|e| format!("fixtures {}: {e}", path.display()))?;
                tracing::info!(records = fixtures.len(), "loaded replay fixtures");
                builder = builder.fixtures(fixtures);
            }
            ProviderMode::Live | ProviderMode::Record => {
                let s = &self.secrets;
                let ideation = OpenAiChat::new(self.live(&self.ideation_base_url, &s.ideation_api_key, &self.ideation_model))
                    .map_err(|e| e.to_string())?;
                let codegen = AnthropicMessages::new(self.live(&self.codegen_base_url, &s.codegen_api_key, &self.codegen_model))
                    .map_err(|e| e.to_string())?;
                builder = builder.ideation(Arc::new(ideation)).codegen(Arc::new(codegen));
            }
        }
        builder.build().map_err(|e| e.to_string())
    }

    /// Opens the store and builds everything the server needs.
    pub fn build_state(&self) -> std::result::Result<AppState, String> {
        self.validate()?;
        let store = ProjectStore::open(&self.data_dir).map_err(|e| e.to_string())?;
        let gateway = self.build_gateway(&store)?;
        let engine = Engine::new(Arc::new(gateway), self.code_rules.clone(), self.self_invoke);
        Ok(AppState::new(
            store,
            engine,
            ProxySettings {
                api_key: self.secrets.self_invoke_api_key.clone(),
                chat_url: self.self_invoke_chat_url.clone(),
                images_url: self.self_invoke_images_url.clone(),
            },
            self.public_origin.clone(),
        ))
    }
}

#[derive(Clone)]
pub struct ProxySettings {
    pub api_key: Option<String>,
    pub chat_url: String,
    pub images_url: String,
}

impl std::fmt::Debug for ProxySettings {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProxySettings")
            .field("chat_url", &self.chat_url)
            .field("images_url", &self.images_url)
            .finish_non_exhaustive()
    }
}

struct Inner {
    store: Arc<ProjectStore>,
    engine: Arc<Engine>,
    proxy: ProxySettings,
    http: reqwest::Client,
    public_origin: Option<String>,
    locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

/// Shared server state; cheap to clone.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

impl AppState {
    pub fn new(store: ProjectStore, engine: Engine, proxy: ProxySettings, public_origin: Option<String>) -> Self {
        Self {
            inner: Arc::new(Inner {
                store: Arc::new(store),
                engine: Arc::new(engine),
                proxy,
                http: reqwest::Client::new(),
                public_origin,
                locks: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn store(&self) -> &ProjectStore {
        &self.inner.store
    }

    pub fn engine(&self) -> &Engine {
        &self.inner.engine
    }

    fn lock_for(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        self.inner.locks.lock().unwrap().entry(id.to_string()).or_default().clone()
    }

    fn forget_lock(&self, id: &str) {
        self.inner.locks.lock().unwrap().remove(id);
    }

    /// Runs a store-only operation off the async runtime.
    async fn blocking<T, F>(&self, op: F) -> std::result::Result<T, ApiError>
    where
        T: Send + 'static,
        F: FnOnce(&ProjectStore) -> Result<T> + Send + 'static,
    {
        let store = self.inner.store.clone();
        tokio::task::spawn_blocking(move || op(&store))
            .await
            .map_err(|e| Error::Storage(format!("worker failed: {e}")))?
            .map_err(ApiError::from)
    }

    /// Loads, mutates and saves a project while holding its writer lock.
    /// A second writer arriving meanwhile gets `busy`.
    async fn mutate<T, F>(&self, id: String, op: F) -> std::result::Result<T, ApiError>
    where
        T: Send + 'static,
        F: FnOnce(&Engine, &mut Project) -> Result<T> + Send + 'static,
    {
        let lock = self.lock_for(&id);
        let _guard = lock.try_lock_owned().map_err(|_| Error::Busy)?;
        let engine = self.inner.engine.clone();
        self.blocking(move |store| {
            let mut project = store.load(&id)?;
            let out = op(&engine, &mut project)?;
            project.touch();
            store.save(&project)?;
            Ok(out)
        })
        .await
    }
}

pub fn router(state: AppState) -> Router {
    routes::router(state)
}

/// Serves until ctrl-c.
pub async fn serve(listener: TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
