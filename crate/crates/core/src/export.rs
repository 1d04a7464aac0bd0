//! Standalone html documents built from stored code versions.

use serde::{Deserialize, Serialize};

use crate::codegen::CodeVersion;
use crate::error::{Error, Result};
use crate::project::Project;
use crate::prompts::endpoints::{rewrite_for_origin, DATA_URL};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ExportMode {
    /// Embed the placeholder data so the file runs without the server.
    Inline,
    /// Point data and proxy URLs at a running server.
    Server { origin: String },
}

/// Finds the version to export. Defaults to the highest approved step, then
/// to the highest step with any version.
pub fn resolve_version<'p>(
    project: &'p Project,
    step: Option<usize>,
    version: Option<&str>,
) -> Result<(usize, &'p CodeVersion)> {
    resolve(project, step, version, true)
}

/// Finds the version to preview. Defaults to the highest step with a version.
pub fn resolve_preview<'p>(
    project: &'p Project,
    step: Option<usize>,
    version: Option<&str>,
) -> Result<(usize, &'p CodeVersion)> {
    resolve(project, step, version, false)
}

fn resolve<'p>(
    project: &'p Project,
    step: Option<usize>,
    version: Option<&str>,
    prefer_approved: bool,
) -> Result<(usize, &'p CodeVersion)> {
    let plan = project.plan.as_ref().ok_or(Error::NothingToExport)?;
    let step = match (step, version) {
        (Some(i), _) => plan.step(i)?,
        (None, Some(v)) => plan
            .steps
            .iter()
            .find(|s| s.version(v).is_some())
            .ok_or_else(|| Error::UnknownVersion(v.to_string()))?,
        (None, None) => plan
            .highest_approved()
            .filter(|_| prefer_approved)
            .or_else(|| plan.highest_with_version())
            .ok_or(Error::NothingToExport)?,
    };
    let found = match version {
        Some(v) => step.version(v).ok_or_else(|| Error::UnknownVersion(v.to_string()))?,
        None => step.current().ok_or(Error::NothingToExport)?,
    };
    Ok((step.index, found))
}

fn data_shim(raw_text: &str) -> String {
    let embedded = raw_text.trim().replace("</", "<\\/");
    format!(
        "<script>\n\
         window.__placeholderData = {embedded};\n\
         (function () {{\n\
         \x20 var realFetch = window.fetch;\n\
         \x20 window.fetch = function (input, init) {{\n\
         \x20   var url = typeof input === 'string' ? input : input && input.url;\n\
         \x20   if (url === '{DATA_URL}') {{\n\
         \x20     return Promise.resolve(new Response(JSON.stringify(window.__placeholderData), {{ headers: {{ 'Content-Type': 'application/json' }} }}));\n\
         \x20   }}\n\
         \x20   return realFetch.apply(this, arguments);\n\
         \x20 }};\n\
         }})();\n\
         </script>\n"
    )
}

/// Index just after the opening `<head ...>` tag, or before the first
/// `<script`, or 0.
fn injection_point(html: &str) -> usize {
    let lower = html.to_ascii_lowercase();
    if let Some(h) = lower.find("<head") {
        if let Some(close) = lower[h..].find('>') {
            let mut at = h + close + 1;
            if html[at..].starts_with('\n') {
                at += 1;
            }
            return at;
        }
    }
    lower.find("<script").unwrap_or(0)
}

pub fn render_export(project: &Project, html: &str, mode: &ExportMode) -> String {
    match mode {
        ExportMode::Inline => match &project.data {
            Some(data) => {
                let at = injection_point(html);
                format!("{}{}{}", &html[..at], data_shim(&data.raw_text), &html[at..])
            }
            None => html.to_string(),
        },
        ExportMode::Server { origin } => rewrite_for_origin(html, origin, &project.id),
    }
}
