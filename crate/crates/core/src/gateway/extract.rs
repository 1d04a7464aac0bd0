//! Structured-value extraction from free-text completions.

use serde_json::Value;
use thiserror::Error;

use crate::markdown::fenced_blocks;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("no JSON array found in completion")]
    NoArrayFound,
    #[error("malformed JSON array starting at byte {0}")]
    MalformedArray(usize),
}

/// Finds the first well-formed JSON array in a completion.
///
/// Fenced code blocks are searched first, then the raw text. Within a region,
/// each `[` is tried in order: the span up to its balancing `]` is parsed, and
/// the first span that parses wins. Trailing commas before `]`/`}` are
/// tolerated since models emit them often.
pub fn extract_json_array(text: &str) -> Result<Vec<Value>, ExtractError> {
    let mut first_bracket: Option<usize> = None;

    for block in fenced_blocks(text) {
        match scan_region(block.body) {
            Scan::Found(values) => return Ok(values),
            Scan::Malformed(pos) => {
                first_bracket.get_or_insert(block.offset + pos);
            }
            Scan::NoBracket => {}
        }
    }

    match scan_region(text) {
        Scan::Found(values) => Ok(values),
        Scan::Malformed(pos) => Err(ExtractError::MalformedArray(first_bracket.unwrap_or(pos))),
        Scan::NoBracket => match first_bracket {
            Some(pos) => Err(ExtractError::MalformedArray(pos)),
            None => Err(ExtractError::NoArrayFound),
        },
    }
}

enum Scan {
    Found(Vec<Value>),
    Malformed(usize),
    NoBracket,
}

fn scan_region(region: &str) -> Scan {
    let mut first = None;
    for (start, _) in region.match_indices('[') {
        first.get_or_insert(start);
        let Some(end) = balancing_bracket(region, start) else {
            continue;
        };
        let candidate = strip_trailing_commas(&region[start..=end]);
        if let Ok(Value::Array(values)) = serde_json::from_str::<Value>(&candidate) {
            return Scan::Found(values);
        }
    }
    match first {
        Some(pos) => Scan::Malformed(pos),
        None => Scan::NoBracket,
    }
}

/// Byte index of the `]` matching the `[` at `start`, skipping string contents.
fn balancing_bracket(text: &str, start: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, b) in text.bytes().enumerate().skip(start) {
        if in_string {
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'[' => depth += 1,
            b']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn strip_trailing_commas(json: &str) -> String {
    let bytes = json.as_bytes();
    let mut out = String::with_capacity(json.len());
    let mut in_string = false;
    let mut escaped = false;
    for (i, ch) in json.char_indices() {
        if in_string {
            match ch {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_string = false,
                _ => {}
            }
            out.push(ch);
            continue;
        }
        if ch == '"' {
            in_string = true;
        } else if ch == ',' {
            let next = bytes[i + 1..].iter().find(|b| !b.is_ascii_whitespace());
            if matches!(next, Some(b']') | Some(b'}')) {
                continue;
            }
        }
        out.push(ch);
    }
    out
}
