use crate::config::{PatternConfig, SyntaxProfile};
use crate::lexer::{segments, SegmentKind};
use crate::model::{CommentKind, CommentRecord, Diagnostic, LineIndex, SourceRange};

use super::label::parse_label;

/// Comments found in one file plus any grammar problems hit on the way.
#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub records: Vec<CommentRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Extracts every line and block comment of `source` in source order, one
/// record per comment token. Labels and clauses are left empty.
pub fn extract_comments(file: &str, source: &str, profile: &SyntaxProfile) -> Extraction {
    let index = LineIndex::new(source);
    let mut out = Extraction::default();
    for seg in segments(source, profile) {
        let text = &source[seg.start..seg.end];
        let Some(range) = SourceRange::new(&index, seg.start, seg.end) else {
            continue;
        };
        let (kind, body) = match seg.kind {
            SegmentKind::LineComment => (CommentKind::Line, &text[profile.line_comment.len()..]),
            SegmentKind::BlockComment { terminated } => {
                let inner = &text[profile.block_comment_open.len()..];
                let inner = if terminated {
                    &inner[..inner.len() - profile.block_comment_close.len()]
                } else {
                    out.diagnostics.push(Diagnostic::grammar(
                        file,
                        Some(range),
                        "unterminated block comment runs to end of file",
                    ));
                    inner
                };
                (CommentKind::Block, inner)
            }
            SegmentKind::Code | SegmentKind::Str => continue,
        };
        out.records.push(CommentRecord {
            file: file.to_string(),
            kind,
            range,
            body: body.to_string(),
            label: None,
            clauses: Vec::new(),
            scope: String::new(),
            node_id: None,
        });
    }
    out
}

/// Coalesces stacked own-line `//` comments that share an indentation and
/// have no blank line between them. A line that parses as a label starts a
/// new record.
pub fn coalesce(records: Vec<CommentRecord>, source: &str, patterns: &PatternConfig) -> Vec<CommentRecord> {
    let index = LineIndex::new(source);
    let mut out: Vec<CommentRecord> = Vec::with_capacity(records.len());
    for rec in records {
        if let Some(prev) = out.last_mut() {
            if can_join(prev, &rec, source, &index) && parse_label(&rec.body, patterns).is_none() {
                prev.body.push('\n');
                prev.body.push_str(&rec.body);
                prev.range.end = rec.range.end;
                prev.range.end_line = rec.range.end_line;
                continue;
            }
        }
        out.push(rec);
    }
    out
}

fn can_join(prev: &CommentRecord, next: &CommentRecord, source: &str, index: &LineIndex) -> bool {
    prev.kind == CommentKind::Line
        && next.kind == CommentKind::Line
        && next.range.start_line == prev.range.end_line + 1
        && own_line_indent(source, index, prev.range.end_line, prev_last_start(prev, source))
            .zip(own_line_indent(source, index, next.range.start_line, next.range.start))
            .is_some_and(|(a, b)| a == b)
}

/// Start offset of the last physical line of a (possibly coalesced) record.
fn prev_last_start(rec: &CommentRecord, source: &str) -> usize {
    let text = &source[rec.range.start..rec.range.end];
    match text.rfind('\n') {
        Some(nl) => {
            let line_start = rec.range.start + nl + 1;
            let rest = &source[line_start..rec.range.end];
            line_start + (rest.len() - rest.trim_start().len())
        }
        None => rec.range.start,
    }
}

/// The indentation before the comment token at `at`, if only whitespace
/// precedes it on its line.
fn own_line_indent<'a>(source: &'a str, index: &LineIndex, line: usize, at: usize) -> Option<&'a str> {
    let prefix = &source[index.line_start(line)..at];
    prefix.chars().all(char::is_whitespace).then_some(prefix)
}
