use crate::error::{Error, Result};
use crate::markdown::fenced_blocks;

fn find_ci(haystack: &str, needle: &str) -> Option<usize> {
    haystack.to_ascii_lowercase().find(needle)
}

fn rfind_ci(haystack: &str, needle: &str) -> Option<usize> {
    haystack.to_ascii_lowercase().rfind(needle)
}

/// Start of the document: the first `<!DOCTYPE` or `<html`.
fn doc_start(text: &str) -> Option<usize> {
    match (find_ci(text, "<!doctype"), find_ci(text, "<html")) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn has_doc_marker(text: &str) -> bool {
    doc_start(text).is_some()
}

/// Extracts the html document from a model completion.
///
/// Uses the first fenced block that contains a document (unless the text
/// already begins with one), then cuts from the first document start to the
/// last `</html>`, normalizes line endings to LF, and ends with one newline.
pub fn sanitize_code(raw: &str) -> Result<String> {
    let trimmed = raw.trim_start();
    let starts_with_doc = doc_start(trimmed) == Some(0);
    let source = if starts_with_doc {
        trimmed
    } else {
        fenced_blocks(raw)
            .into_iter()
            .find(|b| has_doc_marker(b.body))
            .map_or(raw, |b| b.body)
    };
    let start = doc_start(source).ok_or(Error::SanitizeFailure)?;
    let doc = &source[start..];
    let doc = match rfind_ci(doc, "</html>") {
        Some(end) => &doc[..end + "</html>".len()],
        None => doc,
    };
    let mut out = doc.replace("\r\n", "\n").replace('\r', "\n");
    out.truncate(out.trim_end().len());
    out.push('\n');
    Ok(out)
}
