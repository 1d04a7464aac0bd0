use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use regex::Regex;
use thiserror::Error;

use super::{ModelRole, PromptRequest};

static PLACEHOLDER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\{([A-Za-z_][A-Za-z0-9_]*)\}").unwrap());

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("missing binding for placeholder {{{0}}}")]
    MissingPlaceholder(String),
    #[error("binding {0:?} does not match any placeholder")]
    UnknownPlaceholder(String),
}

/// A prompt with `{name}` placeholders in its system and user text.
///
/// The placeholder set is derived from the text at construction. Bound
/// values are inserted verbatim and never rescanned, so few-shot blocks that
/// contain literal braces (JSX, `{openai_api_key}`) are safe to bind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    name: &'static str,
    role: ModelRole,
    system_text: String,
    user_text: String,
    placeholders: Vec<String>,
}

impl PromptTemplate {
    pub fn new(
        name: &'static str,
        role: ModelRole,
        system_text: impl Into<String>,
        user_text: impl Into<String>,
    ) -> Self {
        let system_text = system_text.into();
        let user_text = user_text.into();
        let mut placeholders = Vec::new();
        for text in [&system_text, &user_text] {
            for cap in PLACEHOLDER.captures_iter(text) {
                let name = cap[1].to_string();
                if !placeholders.contains(&name) {
                    placeholders.push(name);
                }
            }
        }
        Self {
            name,
            role,
            system_text,
            user_text,
            placeholders,
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn role(&self) -> ModelRole {
        self.role
    }

    pub fn system_text(&self) -> &str {
        &self.system_text
    }

    pub fn user_text(&self) -> &str {
        &self.user_text
    }

    /// Placeholder names in order of first appearance.
    pub fn placeholders(&self) -> &[String] {
        &self.placeholders
    }

    /// Substitutes every placeholder and builds a request with the role's
    /// default sampling parameters.
    pub fn render(&self, bindings: &BTreeMap<&str, String>) -> Result<PromptRequest, TemplateError> {
        if let Some(missing) = self
            .placeholders
            .iter()
            .find(|p| !bindings.contains_key(p.as_str()))
        {
            return Err(TemplateError::MissingPlaceholder(missing.clone()));
        }
        let known: BTreeSet<&str> = self.placeholders.iter().map(String::as_str).collect();
        if let Some(extra) = bindings.keys().find(|k| !known.contains(*k)) {
            return Err(TemplateError::UnknownPlaceholder(extra.to_string()));
        }
        Ok(PromptRequest {
            role: self.role,
            rendered_system: substitute(&self.system_text, bindings),
            rendered_user: substitute(&self.user_text, bindings),
            max_output_tokens: self.role.default_max_output_tokens(),
            temperature: self.role.default_temperature(),
        })
    }
}

fn substitute(text: &str, bindings: &BTreeMap<&str, String>) -> String {
    PLACEHOLDER
        .replace_all(text, |cap: &regex::Captures<'_>| {
            bindings
                .get(&cap[1])
                .cloned()
                .unwrap_or_else(|| cap[0].to_string())
        })
        .into_owned()
}

/// Builds a binding map from `(name, value)` pairs.
pub fn bindings<I, V>(pairs: I) -> BTreeMap<&'static str, String>
where
    I: IntoIterator<Item = (&'static str, V)>,
    V: Into<String>,
{
    pairs.into_iter().map(|(k, v)| (k, v.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn debug_template() -> PromptTemplate {
        PromptTemplate::new(
            "debug",
            ModelRole::Codegen,
            "Project: {spec}. Task: {task}. Problem again: {problem}.",
            "Please fix the problem that the user describes: {problem}",
        )
    }

    #[test]
    fn placeholders_in_order_of_appearance() {
        assert_eq!(debug_template().placeholders(), ["spec", "task", "problem"]);
    }

    #[test]
    fn substitutes_every_occurrence() {
        let req = debug_template()
            .render(&bindings([
                ("spec", "s"),
                ("task", "t"),
                ("problem", "answer shows early"),
            ]))
            .unwrap();
        assert!(req.rendered_user.contains("answer shows early"));
        assert_eq!(req.rendered_system, "Project: s. Task: t. Problem again: answer shows early.");
        assert_eq!(req.role, ModelRole::Codegen);
        assert_eq!(req.max_output_tokens, 4096);
    }

    #[test]
    fn missing_binding() {
        let err = debug_template()
            .render(&bindings([("task", "t"), ("problem", "p")]))
            .unwrap_err();
        assert_eq!(err, TemplateError::MissingPlaceholder("spec".into()));
    }

    #[test]
    fn extra_binding() {
        let err = debug_template()
            .render(&bindings([("spec", "s"), ("task", "t"), ("problem", "p"), ("foo", "x")]))
            .unwrap_err();
        assert_eq!(err, TemplateError::UnknownPlaceholder("foo".into()));
    }

    #[test]
    fn bound_values_are_not_rescanned() {
        let t = PromptTemplate::new("t", ModelRole::Ideation, "{a}", "{b}");
        let req = t
            .render(&bindings([("a", "{b}"), ("b", "Bearer {openai_api_key}")]))
            .unwrap();
        assert_eq!(req.rendered_system, "{b}");
        assert_eq!(req.rendered_user, "Bearer {openai_api_key}");
    }

    #[test]
    fn non_identifier_braces_are_literal() {
        let t = PromptTemplate::new("t", ModelRole::Ideation, "const { a } = X; {{x}}", "");
        assert_eq!(t.placeholders(), ["x"]);
    }
}
