//! Splits source text into code, string-literal and comment segments.

use crate::config::SyntaxProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Code,
    /// A string or character literal, delimiters included.
    Str,
    /// From the line token up to (not including) the newline.
    LineComment,
    /// From the open token through the close token.
    BlockComment { terminated: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn is_comment(&self) -> bool {
        matches!(
            self.kind,
            SegmentKind::LineComment | SegmentKind::BlockComment { .. }
        )
    }
}

/// Tokenizes `source`. Segments are contiguous and cover the whole input.
///
/// A backslash inside a literal escapes the next character. Literals also end
/// at a newline so that a stray quote cannot swallow the rest of the file.
/// Block comments do not nest.
pub fn segments(source: &str, profile: &SyntaxProfile) -> Vec<Segment> {
    let bytes = source.as_bytes();
    let line = profile.line_comment.as_bytes();
    let open = profile.block_comment_open.as_bytes();
    let close = profile.block_comment_close.as_bytes();
    let delims: Vec<&[u8]> = profile.string_delimiters.iter().map(|d| d.as_bytes()).collect();

    let mut out: Vec<Segment> = Vec::new();
    let mut push = |kind: SegmentKind, start: usize, end: usize| {
        if start >= end {
            return;
        }
        if kind == SegmentKind::Code {
            if let Some(last) = out.last_mut() {
                if last.kind == SegmentKind::Code && last.end == start {
                    last.end = end;
                    return;
                }
            }
        }
        out.push(Segment { kind, start, end });
    };

    let mut i = 0;
    let mut code_start = 0;
    while i < bytes.len() {
        let rest = &bytes[i..];
        // Longer token first when one prefixes the other.
        let (first, second) = if open.len() >= line.len() {
            ((open, true), (line, false))
        } else {
            ((line, false), (open, true))
        };
        let comment = [first, second]
            .into_iter()
            .find(|(tok, _)| rest.starts_with(tok))
            .map(|(_, is_block)| is_block);
        if let Some(is_block) = comment {
            push(SegmentKind::Code, code_start, i);
            let start = i;
            if is_block {
                let body_from = i + open.len();
                match find(&bytes[body_from..], close) {
                    Some(off) => {
                        i = body_from + off + close.len();
                        push(SegmentKind::BlockComment { terminated: true }, start, i);
                    }
                    None => {
                        i = bytes.len();
                        push(SegmentKind::BlockComment { terminated: false }, start, i);
                    }
                }
            } else {
                i = memchr_newline(bytes, i);
                push(SegmentKind::LineComment, start, i);
            }
            code_start = i;
            continue;
        }
        if let Some(delim) = delims.iter().find(|d| rest.starts_with(d)) {
            push(SegmentKind::Code, code_start, i);
            let start = i;
            i += delim.len();
            while i < bytes.len() {
                if bytes[i] == b'\\' {
                    i = (i + 2).min(bytes.len());
                    continue;
                }
                if bytes[i] == b'\n' {
                    break;
                }
                if bytes[i..].starts_with(delim) {
                    i += delim.len();
                    break;
                }
                i += 1;
            }
            // An escape may have stepped onto a continuation byte.
            while i < bytes.len() && !source.is_char_boundary(i) {
                i += 1;
            }
            push(SegmentKind::Str, start, i);
            code_start = i;
            continue;
        }
        i += 1;
    }
    push(SegmentKind::Code, code_start, bytes.len());
    out
}

fn find(hay: &[u8], needle: &[u8]) -> Option<usize> {
    hay.windows(needle.len()).position(|w| w == needle)
}

fn memchr_newline(bytes: &[u8], from: usize) -> usize {
    bytes[from..]
        .iter()
        .position(|&b| b == b'\n')
        .map_or(bytes.len(), |p| from + p)
}

/// Copy of `source` with comments and string-literal contents replaced by
/// spaces (newlines kept), so that byte offsets are preserved.
pub fn mask(source: &str, segs: &[Segment]) -> Vec<u8> {
    let mut out = source.as_bytes().to_vec();
    for s in segs {
        if s.kind != SegmentKind::Code {
            for b in &mut out[s.start..s.end] {
                if *b != b'\n' {
                    *b = b' ';
                }
            }
        }
    }
    out
}
