use serde::{Deserialize, Serialize};

/// A half-open byte range in a source file together with the 1-based lines it
/// covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceRange {
    pub start: usize,
    pub end: usize,
    pub start_line: usize,
    pub end_line: usize,
}

impl SourceRange {
    /// Builds the range `start..end` of `index`'s text. Returns `None` for an
    /// empty or out-of-bounds range.
    pub fn new(index: &LineIndex, start: usize, end: usize) -> Option<Self> {
        if start >= end || end > index.len {
            return None;
        }
        Some(Self {
            start,
            end,
            start_line: index.line_of(start),
            end_line: index.line_of(end - 1),
        })
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn contains(&self, offset: usize) -> bool {
        self.start <= offset && offset < self.end
    }

    pub fn overlaps(&self, other: &SourceRange) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn slice<'a>(&self, source: &'a str) -> &'a str {
        &source[self.start..self.end]
    }
}

/// Maps byte offsets to 1-based line numbers.
#[derive(Debug, Clone)]
pub struct LineIndex {
    line_starts: Vec<usize>,
    len: usize,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Self {
            line_starts,
            len: text.len(),
        }
    }

    pub fn line_of(&self, offset: usize) -> usize {
        match self.line_starts.binary_search(&offset) {
            Ok(i) => i + 1,
            Err(i) => i,
        }
    }

    /// Byte offset at which 1-based `line` starts.
    pub fn line_start(&self, line: usize) -> usize {
        self.line_starts
            .get(line.saturating_sub(1))
            .copied()
            .unwrap_or(self.len)
    }

    /// Byte offset of the end of `line`, excluding its newline.
    pub fn line_end(&self, line: usize) -> usize {
        match self.line_starts.get(line) {
            Some(&next) => next - 1,
            None => self.len,
        }
    }

    pub fn line_count(&self) -> usize {
        self.line_starts.len()
    }
}
