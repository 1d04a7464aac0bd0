//! Single choke point for model interactions.
//!
//! Every prompt goes through [`Gateway::complete`], which validates it,
//! charges the per-project call budget, and then dispatches according to the
//! configured [`ProviderMode`]: straight to a live provider, to a provider
//! while appending a [`TranscriptRecord`], or to a fixture store keyed by
//! request digest.

mod extract;
mod live;
mod template;
mod transcript;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extract::{extract_json_array, ExtractError};
pub use live::{AnthropicMessages, LiveProviderConfig, OpenAiChat};
pub use template::{bindings, PromptTemplate, TemplateError};
pub use transcript::{
    request_digest, FixtureStore, TranscriptLog, TranscriptRecord, TRANSCRIPT_FILE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelRole {
    Ideation,
    Codegen,
}

impl ModelRole {
    pub fn default_temperature(self) -> f64 {
        match self {
            ModelRole::Ideation => 0.7,
            ModelRole::Codegen => 0.2,
        }
    }

    pub fn default_max_output_tokens(self) -> u32 {
        match self {
            ModelRole::Ideation => 1024,
            ModelRole::Codegen => 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRequest {
    pub role: ModelRole,
    pub rendered_system: String,
    pub rendered_user: String,
    pub max_output_tokens: u32,
    pub temperature: f64,
}

impl PromptRequest {
    pub fn digest(&self) -> String {
        request_digest(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionResult {
    pub text: String,
    pub provider_model_id: String,
    pub input_tokens: u64,
    pub output_tokens: u64,
    /// Set when the provider stopped at the output token cap.
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderMode {
    Live,
    Record,
    Replay,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatewayError {
    #[error("provider returned status {status}: {body}")]
    Provider { status: u16, body: String },
    #[error("provider did not answer within {0:?}")]
    Timeout(Duration),
    #[error("no recorded completion for request digest {0}")]
    ReplayMiss(String),
    #[error("call budget of {budget} completions exhausted for project {project}")]
    BudgetExceeded { project: String, budget: u32 },
    #[error("invalid prompt request: {0}")]
    InvalidRequest(String),
    #[error("gateway misconfigured: {0}")]
    Config(String),
    #[error("transcript store: {0}")]
    Transcript(String),
}

/// A backend able to answer one prompt. Implementations must be safe to call
/// from several request handlers at once.
pub trait Provider: Send + Sync {
    fn complete(&self, req: &PromptRequest) -> Result<CompletionResult, GatewayError>;
}

impl<F> Provider for F
where
    F: Fn(&PromptRequest) -> Result<CompletionResult, GatewayError> + Send + Sync,
{
    fn complete(&self, req: &PromptRequest) -> Result<CompletionResult, GatewayError> {
        self(req)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GatewayLimits {
    pub ideation_token_cap: u32,
    pub codegen_token_cap: u32,
    /// Completions allowed per project over the gateway's lifetime.
    pub call_budget: u32,
}

impl Default for GatewayLimits {
    fn default() -> Self {
        Self {
            ideation_token_cap: ModelRole::Ideation.default_max_output_tokens(),
            codegen_token_cap: ModelRole::Codegen.default_max_output_tokens(),
            call_budget: 200,
        }
    }
}

impl GatewayLimits {
    pub fn token_cap(&self, role: ModelRole) -> u32 {
        match role {
            ModelRole::Ideation => self.ideation_token_cap,
            ModelRole::Codegen => self.codegen_token_cap,
        }
    }
}

pub struct Gateway {
    mode: ProviderMode,
    limits: GatewayLimits,
    ideation: Option<Arc<dyn Provider>>,
    codegen: Option<Arc<dyn Provider>>,
    fixtures: Option<FixtureStore>,
    transcripts: Option<TranscriptLog>,
    calls: Mutex<HashMap<String, u32>>,
    // Replay position per (project, digest); repeated identical requests walk
    // the recorded results in order and then stick to the last one.
    cursors: Mutex<HashMap<(String, String), usize>>,
}

impl std::fmt::Debug for Gateway {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gateway")
            .field("mode", &self.mode)
            .field("limits", &self.limits)
            .finish_non_exhaustive()
    }
}

pub struct GatewayBuilder {
    mode: ProviderMode,
    limits: GatewayLimits,
    ideation: Option<Arc<dyn Provider>>,
    codegen: Option<Arc<dyn Provider>>,
    fixtures: Option<FixtureStore>,
    transcript_root: Option<PathBuf>,
}

impl GatewayBuilder {
    pub fn limits(mut self, limits: GatewayLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn ideation(mut self, provider: Arc<dyn Provider>) -> Self {
        self.ideation = Some(provider);
        self
    }

    pub fn codegen(mut self, provider: Arc<dyn Provider>) -> Self {
        self.codegen = Some(provider);
        self
    }

    /// Same provider for both roles.
    pub fn provider(self, provider: Arc<dyn Provider>) -> Self {
        self.ideation(provider.clone()).codegen(provider)
    }

    pub fn fixtures(mut self, fixtures: FixtureStore) -> Self {
        self.fixtures = Some(fixtures);
        self
    }

    /// Directory under which `<project_id>/transcript.jsonl` files are appended
    /// in Record mode.
    pub fn transcript_root(mut self, root: impl Into<PathBuf>) -> Self {
        self.transcript_root = Some(root.into());
        self
    }

    pub fn build(self) -> Result<Gateway, GatewayError> {
        match self.mode {
            ProviderMode::Replay if self.fixtures.is_none() => {
                return Err(GatewayError::Config("replay mode requires a fixture store".into()))
            }
            ProviderMode::Live | ProviderMode::Record
                if self.ideation.is_none() || self.codegen.is_none() =>
            {
                return Err(GatewayError::Config(
                    "live and record modes require providers for both roles".into(),
                ))
            }
            ProviderMode::Record if self.transcript_root.is_none() => {
                return Err(GatewayError::Config("record mode requires a transcript root".into()))
            }
            _ => {}
        }
        Ok(Gateway {
            mode: self.mode,
            limits: self.limits,
            ideation: self.ideation,
            codegen: self.codegen,
            fixtures: self.fixtures,
            transcripts: self.transcript_root.map(TranscriptLog::new),
            calls: Mutex::default(),
            cursors: Mutex::default(),
        })
    }
}

impl Gateway {
    pub fn builder(mode: ProviderMode) -> GatewayBuilder {
        GatewayBuilder {
            mode,
            limits: GatewayLimits::default(),
            ideation: None,
            codegen: None,
            fixtures: None,
            transcript_root: None,
        }
    }

    pub fn mode(&self) -> ProviderMode {
        self.mode
    }

    pub fn limits(&self) -> GatewayLimits {
        self.limits
    }

    /// Completions charged to `project_id` so far.
    pub fn calls_used(&self, project_id: &str) -> u32 {
        self.calls.lock().unwrap().get(project_id).copied().unwrap_or(0)
    }

    pub fn validate(&self, req: &PromptRequest) -> Result<(), GatewayError> {
        let cap = self.limits.token_cap(req.role);
        if req.max_output_tokens == 0 || req.max_output_tokens > cap {
            return Err(GatewayError::InvalidRequest(format!(
                "max_output_tokens {} outside 1..={cap}",
                req.max_output_tokens
            )));
        }
        if !(0.0..=2.0).contains(&req.temperature) {
            return Err(GatewayError::InvalidRequest(format!(
                "temperature {} outside [0, 2]",
                req.temperature
            )));
        }
        Ok(())
    }

    fn charge(&self, project_id: &str) -> Result<(), GatewayError> {
        let mut calls = self.calls.lock().unwrap();
        let used = calls.entry(project_id.to_string()).or_insert(0);
        if *used >= self.limits.call_budget {
            return Err(GatewayError::BudgetExceeded {
                project: project_id.to_string(),
                budget: self.limits.call_budget,
            });
        }
        *used += 1;
        Ok(())
    }

    fn provider_for(&self, role: ModelRole) -> Result<&Arc<dyn Provider>, GatewayError> {
        let provider = match role {
            ModelRole::Ideation => self.ideation.as_ref(),
            ModelRole::Codegen => self.codegen.as_ref(),
        };
        provider.ok_or_else(|| GatewayError::Config(format!("no provider for role {role:?}")))
    }

    /// Answers `req` on behalf of `project_id`.
    pub fn complete(
        &self,
        project_id: &str,
        req: &PromptRequest,
    ) -> Result<CompletionResult, GatewayError> {
        self.validate(req)?;
        self.charge(project_id)?;
        match self.mode {
            ProviderMode::Live => self.provider_for(req.role)?.complete(req),
            ProviderMode::Record => {
                let result = self.provider_for(req.role)?.complete(req)?;
                let log = self.transcripts.as_ref().expect("checked at build");
                log.append(project_id, req, &result)?;
                Ok(result)
            }
            ProviderMode::Replay => {
                let fixtures = self.fixtures.as_ref().expect("checked at build");
                let digest = req.digest();
                let mut cursors = self.cursors.lock().unwrap();
                let cursor = cursors
                    .entry((project_id.to_string(), digest.clone()))
                    .or_insert(0);
                let result = fixtures
                    .lookup(&digest, *cursor)
                    .cloned()
                    .ok_or(GatewayError::ReplayMiss(digest))?;
                *cursor += 1;
                Ok(result)
            }
        }
    }
}
