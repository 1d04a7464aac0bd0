use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::CodeRules;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    LineLimitExceeded,
    ForbiddenComponent,
    MissingCdnTag,
    MultipleDocuments,
    MissingRootMount,
    ResidualProse,
    ElidedCodeComment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeIssue {
    pub kind: IssueKind,
    pub detail: String,
    pub severity: Severity,
}

impl CodeIssue {
    fn error(kind: IssueKind, detail: String) -> Self {
        Self { kind, detail, severity: Severity::Error }
    }

    fn warning(kind: IssueKind, detail: String) -> Self {
        Self { kind, detail, severity: Severity::Warning }
    }
}

pub fn has_errors(issues: &[CodeIssue]) -> bool {
    issues.iter().any(|i| i.severity == Severity::Error)
}

static ROOT_MOUNT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#"id\s*=\s*(["'])root["']"#).unwrap());

static MUI_DESTRUCTURE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\{([^{}]*)\}\s*=\s*(?:window\.)?MaterialUI\b").unwrap());

static COMMENTS: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"(?s)/\*(.*?)\*/|<!--(.*?)-->|(?m:(?:^|[^:"'\\])//([^\n]*))"#).unwrap()
});

static ELISION: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?ix)
        rest\ of\ (the\ )?(code|component|components|file|app|implementation|sections?)
        | (other|remaining|previous|existing)\ (sections?|code|components?|parts?)\ (remains?|stays?|are|is)\ (the\ same|unchanged)
        | (existing|previous)\ code\ (here|goes\ here|remains|unchanged)
        | \.\.\.\s*(existing|previous|rest|other|same)
        | same\ as\ (before|above)
        | (code|implementation)\ (omitted|unchanged)
        ",
    )
    .unwrap()
});

static TAGS_AND_COMMENTS: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?s)<!--.*?-->|<[^>]*>").unwrap());

fn forbidden_patterns(name: &str) -> Regex {
    let n = regex::escape(name);
    Regex::new(&format!(
        r"</?{n}\b|\bMaterialUI\s*\.\s*{n}\b|createElement\(\s*{n}\b"
    ))
    .expect("escaped name forms a valid pattern")
}

fn count_forbidden(html: &str, name: &str) -> usize {
    let direct = forbidden_patterns(name).find_iter(html).count();
    let destructured: usize = MUI_DESTRUCTURE
        .captures_iter(html)
        .map(|c| {
            c[1].split(|ch: char| ch == ',' || ch == ':' || ch.is_whitespace())
                .filter(|tok| *tok == name)
                .count()
        })
        .sum();
    direct + destructured
}

/// Checks a stored document against the code rules. Total: never fails.
pub fn lint_code(html: &str, rules: &CodeRules) -> Vec<CodeIssue> {
    let mut issues = Vec::new();

    let lines = html.lines().count();
    if lines > rules.max_lines_enforced {
        issues.push(CodeIssue::error(
            IssueKind::LineLimitExceeded,
            format!("{lines} lines, limit {}", rules.max_lines_enforced),
        ));
    } else if lines > rules.max_lines_prompted {
        issues.push(CodeIssue::warning(
            IssueKind::LineLimitExceeded,
            format!("{lines} lines, asked for at most {}", rules.max_lines_prompted),
        ));
    }

    for name in &rules.forbidden_component_names {
        for _ in 0..count_forbidden(html, name) {
            issues.push(CodeIssue::error(IssueKind::ForbiddenComponent, name.clone()));
        }
    }

    for marker in &rules.required_cdn_markers {
        if !html.contains(marker.as_str()) {
            issues.push(CodeIssue::error(IssueKind::MissingCdnTag, marker.clone()));
        }
    }

    let lower = html.to_ascii_lowercase();
    let doctypes = lower.matches("<!doctype").count();
    if doctypes > 1 {
        issues.push(CodeIssue::error(
            IssueKind::MultipleDocuments,
            format!("{doctypes} <!DOCTYPE declarations"),
        ));
    }

    if !ROOT_MOUNT.is_match(html) {
        issues.push(CodeIssue::error(IssueKind::MissingRootMount, "no element with id \"root\"".into()));
    }

    if let Some(start) = lower.find("<!doctype") {
        let before = TAGS_AND_COMMENTS.replace_all(&html[..start], "");
        let prose = before.trim();
        if !prose.is_empty() {
            issues.push(CodeIssue::warning(IssueKind::ResidualProse, prose.chars().take(80).collect()));
        }
    }

    for cap in COMMENTS.captures_iter(html) {
        let body = cap.get(1).or(cap.get(2)).or(cap.get(3)).map_or("", |m| m.as_str());
        if ELISION.is_match(body) {
            issues.push(CodeIssue::error(IssueKind::ElidedCodeComment, body.trim().to_string()));
        }
    }

    issues
}
