//! Lenient fenced-code-block scanning for model completions.
//!
//! Models do not reliably put fences at line starts ("Sure! ```html"), and
//! sometimes nest a second opener inside the first. The scanner accepts a
//! backtick or tilde run of length >= 3 anywhere as an opener; a run is a
//! closer only when the text after it on the same line is empty or does not
//! begin with a word character (so "```html" inside a block is content).

/// A fenced block found in free text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FencedBlock<'a> {
    /// First token after the opening fence, e.g. `json`. May be empty.
    pub info: &'a str,
    /// Raw text between the opening line and the closing fence.
    pub body: &'a str,
    /// Byte offset of `body` within the scanned text.
    pub offset: usize,
    /// Whether a closing fence was found.
    pub closed: bool,
}

fn fence_run_at(bytes: &[u8], i: usize) -> Option<(u8, usize)> {
    let c = bytes[i];
    if c != b'`' && c != b'~' {
        return None;
    }
    let len = bytes[i..].iter().take_while(|&&b| b == c).count();
    (len >= 3).then_some((c, len))
}

fn line_end(text: &str, from: usize) -> usize {
    text[from..].find('\n').map_or(text.len(), |n| from + n)
}

/// Returns every fenced block in `text`, in order of appearance.
pub fn fenced_blocks(text: &str) -> Vec<FencedBlock<'_>> {
    let bytes = text.as_bytes();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let Some((fence_char, fence_len)) = fence_run_at(bytes, i) else {
            i += 1;
            continue;
        };
        let after_run = i + fence_len;
        let eol = line_end(text, after_run);
        let info = text[after_run..eol].split_whitespace().next().unwrap_or("");
        let body_start = (eol + 1).min(text.len());

        let mut j = body_start;
        let mut close = None;
        while j < bytes.len() {
            match fence_run_at(bytes, j) {
                Some((c, len)) if c == fence_char && len >= fence_len => {
                    let rest_first = bytes.get(j + len).copied();
                    let is_opener =
                        matches!(rest_first, Some(b) if b.is_ascii_alphanumeric() || b == b'_');
                    if is_opener {
                        j = line_end(text, j + len);
                    } else {
                        close = Some((j, j + len));
                        break;
                    }
                }
                Some((_, len)) => j += len,
                None => j += 1,
            }
        }

        match close {
            Some((close_start, close_end)) => {
                blocks.push(FencedBlock {
                    info,
                    body: &text[body_start..close_start],
                    offset: body_start,
                    closed: true,
                });
                i = close_end;
            }
            None => {
                blocks.push(FencedBlock {
                    info,
                    body: &text[body_start..],
                    offset: body_start,
                    closed: false,
                });
                break;
            }
        }
    }
    blocks
}
