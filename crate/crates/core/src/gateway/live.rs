//! HTTP providers for the two model roles.

use std::time::Duration;

use reqwest::blocking::{Client, RequestBuilder};
use serde_json::{json, Value};

use super::{CompletionResult, GatewayError, PromptRequest, Provider};

#[derive(Debug, Clone)]
pub struct LiveProviderConfig {
    pub base_url: String,
    pub api_key: String,
    pub model: String,
    pub timeout: Duration,
    /// Extra attempts after a timeout, transport error, or 5xx.
    pub retries: u32,
}

fn build_client(config: &LiveProviderConfig) -> Result<Client, GatewayError> {
    Client::builder()
        .timeout(config.timeout)
        .build()
        .map_err(|e| GatewayError::Config(e.to_string()))
}

fn send_with_retry(
    config: &LiveProviderConfig,
    mut make: impl FnMut() -> RequestBuilder,
) -> Result<Value, GatewayError> {
    let mut attempt = 0;
    loop {
        let outcome = match make().send() {
            Err(e) if e.is_timeout() => Err(GatewayError::Timeout(config.timeout)),
            Err(e) => Err(GatewayError::Provider {
                status: 0,
                body: e.to_string(),
            }),
            Ok(resp) => {
                let status = resp.status();
                let body = resp.text().map_err(|e| GatewayError::Provider {
                    status: status.as_u16(),
                    body: e.to_string(),
                })?;
                if status.is_success() {
                    return serde_json::from_str(&body).map_err(|e| GatewayError::Provider {
                        status: status.as_u16(),
                        body: format!("unparseable response ({e}): {body}"),
                    });
                }
                let err = GatewayError::Provider {
                    status: status.as_u16(),
                    body,
                };
                if status.is_server_error() {
                    Err(err)
                } else {
                    return Err(err);
                }
            }
        };
        if attempt >= config.retries {
            return outcome;
        }
        attempt += 1;
        tracing::warn!(attempt, "retrying provider call");
    }
}

fn malformed(what: &str, body: &Value) -> GatewayError {
    GatewayError::Provider {
        status: 200,
        body: format!("response missing {what}: {body}"),
    }
}

/// OpenAI-style `/chat/completions` endpoint.
#[derive(Debug, Clone)]
pub struct OpenAiChat {
    config: LiveProviderConfig,
    client: Client,
}

impl OpenAiChat {
    pub fn new(config: LiveProviderConfig) -> Result<Self, GatewayError> {
        let client = build_client(&config)?;
        Ok(Self { config, client })
    }
}

impl Provider for OpenAiChat {
    fn complete(&self, req: &PromptRequest) -> Result<CompletionResult, GatewayError> {
        let url = format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'));
        let body = json!({
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": req.rendered_system},
                {"role": "user", "content": req.rendered_user},
            ],
            "max_tokens": req.max_output_tokens,
            "temperature": req.temperature,
        });
        let resp = send_with_retry(&self.config, || {
            self.client
                .post(&url)
                .bearer_auth(&self.config.api_key)
                .json(&body)
        })?;
        let choice = &resp["choices"][0];
        let text = choice["message"]["content"]
            .as_str()
            .ok_or_else(|| malformed("choices[0].message.content", &resp))?;
        Ok(CompletionResult {
            text: text.to_string(),
            provider_model_id: resp["model"].as_str().unwrap_or(&self.config.model).to_string(),
            input_tokens: resp["usage"]["prompt_tokens"].as_u64().unwrap_or(0),
            output_tokens: resp["usage"]["completion_tokens"].as_u64().unwrap_or(0),
            truncated: choice["finish_reason"] == "length",
        })
    }
}

/// Anthropic-style `/messages` endpoint.
#[derive(Debug, Clone)]
pub struct AnthropicMessages {
    config: LiveProviderConfig,
    client: Client,
}

impl AnthropicMessages {
    pub const API_VERSION: &'static str = "2023-06-01";

    pub fn new(config: LiveProviderConfig) -> Result<Self, GatewayError> {
        let client = build_client(&config)?;
        Ok(Self { config, client })
    }
}

impl Provider for AnthropicMessages {
    fn complete(&self, req: &PromptRequest) -> Result<CompletionResult, GatewayError> {
        let url = format!("{}/messages", self.config.base_url.trim_end_matches('/'));
        let body = json!({
            "model": self.config.model,
            "system": req.rendered_system,
            "messages": [{"role": "user", "content": req.rendered_user}],
            "max_tokens": req.max_output_tokens,
            "temperature": req.temperature,
        });
        let resp = send_with_retry(&self.config, || {
            self.client
                .post(&url)
                .header("x-api-key", &self.config.api_key)
                .header("anthropic-version", Self::API_VERSION)
                .json(&body)
        })?;
        let blocks = resp["content"]
            .as_array()
            .ok_or_else(|| malformed("content", &resp))?;
        let text: String = blocks
            .iter()
            .filter(|b| b["type"] == "text")
            .filter_map(|b| b["text"].as_str())
            .collect();
        Ok(CompletionResult {
            text,
            provider_model_id: resp["model"].as_str().unwrap_or(&self.config.model).to_string(),
            input_tokens: resp["usage"]["input_tokens"].as_u64().unwrap_or(0),
            output_tokens: resp["usage"]["output_tokens"].as_u64().unwrap_or(0),
            truncated: resp["stop_reason"] == "max_tokens",
        })
    }
}
