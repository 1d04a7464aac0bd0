//! Canonical URLs written into prompts and stored code.
//!
//! Generated prototypes reference these fixed URLs. The server rewrites them
//! to its real origin when serving a preview, and export rewrites or inlines
//! them, so stored html never depends on where the server happens to run.

use super::fewshot::{UPSTREAM_CHAT_URL, UPSTREAM_IMAGES_URL};

pub const CANONICAL_ORIGIN: &str = "http://localhost:8080";
pub const DATA_URL: &str = "http://localhost:8080/data";
pub const PROXY_COMPLETIONS_URL: &str = "http://localhost:8080/proxy/completions";
pub const PROXY_IMAGES_URL: &str = "http://localhost:8080/proxy/images";

/// Literal credential placeholder kept in prompts and stored code.
pub const KEY_PLACEHOLDER: &str = "{openai_api_key}";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfInvokeMode {
    /// Prototypes call the local proxy, which adds the credential.
    #[default]
    Proxy,
    /// Prototypes call the provider directly; the credential is substituted
    /// into the served document.
    InjectKey,
}

/// Points a self-invocation snippet at the local proxy and drops its
/// credential header lines.
pub fn proxy_rewrite(snippet: &str) -> String {
    snippet
        .replace(UPSTREAM_CHAT_URL, PROXY_COMPLETIONS_URL)
        .replace(UPSTREAM_IMAGES_URL, PROXY_IMAGES_URL)
        .lines()
        .filter(|line| !line.contains("'Authorization'"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Rewrites canonical URLs in stored html for a server reachable at `origin`.
pub fn rewrite_for_origin(html: &str, origin: &str, project_id: &str) -> String {
    let origin = origin.trim_end_matches('/');
    html.replace(DATA_URL, &format!("{origin}/projects/{project_id}/data"))
        .replace(PROXY_COMPLETIONS_URL, &format!("{origin}/proxy/completions"))
        .replace(PROXY_IMAGES_URL, &format!("{origin}/proxy/images"))
}

pub fn inject_key(html: &str, key: &str) -> String {
    html.replace(KEY_PLACEHOLDER, key)
}

/// Stored html as served to the preview frame: upstream calls go to the
/// proxy (or get the key substituted), canonical URLs point at `origin`.
pub fn serve_rewrite(
    html: &str,
    origin: &str,
    project_id: &str,
    mode: SelfInvokeMode,
    key: Option<&str>,
) -> String {
    let html = match (mode, key) {
        (SelfInvokeMode::Proxy, _) => html
            .replace(UPSTREAM_CHAT_URL, PROXY_COMPLETIONS_URL)
            .replace(UPSTREAM_IMAGES_URL, PROXY_IMAGES_URL),
        (SelfInvokeMode::InjectKey, Some(key)) => inject_key(html, key),
        (SelfInvokeMode::InjectKey, None) => html.to_string(),
    };
    rewrite_for_origin(&html, origin, project_id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompts::fewshot::{SELF_INVOKE_IMAGE_EXAMPLE, SELF_INVOKE_TEXT_EXAMPLE};

    #[test]
    fn proxy_rewrite_removes_upstream_and_credentials() {
        for snippet in [SELF_INVOKE_TEXT_EXAMPLE, SELF_INVOKE_IMAGE_EXAMPLE] {
            assert!(snippet.contains(KEY_PLACEHOLDER));
            let out = proxy_rewrite(snippet);
            assert!(!out.contains("api.openai.com"));
            assert!(!out.contains(KEY_PLACEHOLDER));
            assert!(out.contains(PROXY_COMPLETIONS_URL));
        }
        assert!(proxy_rewrite(SELF_INVOKE_IMAGE_EXAMPLE).contains(PROXY_IMAGES_URL));
    }

    #[test]
    fn origin_rewrite() {
        let html = format!("fetch('{DATA_URL}'); fetch('{PROXY_IMAGES_URL}')");
        assert_eq!(
            rewrite_for_origin(&html, "http://127.0.0.1:9000/", "abc"),
            "fetch('http://127.0.0.1:9000/projects/abc/data'); fetch('http://127.0.0.1:9000/proxy/images')"
        );
    }

    #[test]
    fn serve_rewrite_modes() {
        let html = format!("fetch('{UPSTREAM_IMAGES_URL}', 'Bearer {KEY_PLACEHOLDER}'); fetch('{DATA_URL}')");
        let served = serve_rewrite(&html, "http://o", "p", SelfInvokeMode::InjectKey, Some("sk-x"));
        assert_eq!(served, format!("fetch('{UPSTREAM_IMAGES_URL}', 'Bearer sk-x'); fetch('http://o/projects/p/data')"));
        let served = serve_rewrite(&html, "http://o", "p", SelfInvokeMode::Proxy, Some("sk-x"));
        assert!(served.starts_with("fetch('http://o/proxy/images'"));
        assert!(!served.contains("sk-x"));
    }
}
