//! Brace-block structure of a file: nesting depth and declaration scopes.
//!
//! This is token scanning, not parsing. Comments and string literals are
//! masked out first, then `{`/`}` pairs are matched. A block whose header
//! (the text between the previous `;`, `{` or `}` and the opening brace)
//! does not start with a control-flow keyword is treated as a declaration
//! and names a scope.

use crate::lexer::{mask, segments, Segment};
use crate::config::SyntaxProfile;

const CONTROL_KEYWORDS: &[&str] = &[
    "if", "else", "for", "foreach", "while", "do", "switch", "try", "catch", "finally",
    "synchronized", "case", "default", "loop", "match", "unsafe", "async", "move", "return",
    "when", "select", "defer", "go", "with", "using", "lock", "checked", "unchecked", "fixed",
];

const TYPE_KEYWORDS: &[&str] = &[
    "class", "interface", "enum", "struct", "trait", "record", "namespace", "object", "mod",
    "union", "module", "package",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    /// A named declaration; `scope_name` carries an `#n` suffix for the n-th
    /// overload (n ≥ 1) among same-named siblings.
    Declaration { name: String, scope_name: String },
    Control,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Offset of the opening brace.
    pub open: usize,
    /// Offset of the closing brace, `None` if the block is never closed.
    pub close: Option<usize>,
    /// Offset of the first character of the block's header.
    pub header_start: usize,
    pub kind: BlockKind,
    pub parent: Option<usize>,
}

impl Block {
    pub fn is_declaration(&self) -> bool {
        matches!(self.kind, BlockKind::Declaration { .. })
    }

    /// End of the block's interior (the closing brace offset or EOF).
    pub fn interior_end(&self, len: usize) -> usize {
        self.close.unwrap_or(len)
    }

    /// Whether `offset` lies strictly between the braces.
    pub fn encloses(&self, offset: usize, len: usize) -> bool {
        self.open < offset && offset < self.interior_end(len)
    }
}

#[derive(Debug, Clone)]
pub struct FileStructure {
    pub segments: Vec<Segment>,
    pub blocks: Vec<Block>,
    /// False if a `}` had no opener or a `{` was never closed.
    pub balanced: bool,
    len: usize,
}

impl FileStructure {
    pub fn analyze(source: &str, profile: &SyntaxProfile) -> Self {
        let segs = segments(source, profile);
        let masked = mask(source, &segs);
        let mut blocks: Vec<Block> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut balanced = true;
        for (i, &b) in masked.iter().enumerate() {
            match b {
                b'{' => {
                    let (header_start, header) = header_before(&masked, i);
                    let kind = classify(&header);
                    blocks.push(Block {
                        open: i,
                        close: None,
                        header_start,
                        kind,
                        parent: stack.last().copied(),
                    });
                    stack.push(blocks.len() - 1);
                }
                b'}' => match stack.pop() {
                    Some(idx) => blocks[idx].close = Some(i),
                    None => balanced = false,
                },
                _ => {}
            }
        }
        if !stack.is_empty() {
            balanced = false;
        }
        assign_overload_ordinals(&mut blocks);
        Self {
            segments: segs,
            blocks,
            balanced,
            len: source.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Indices of blocks enclosing `offset`, outermost first.
    pub fn enclosing(&self, offset: usize) -> Vec<usize> {
        let mut chain = Vec::new();
        let mut cur = self.innermost(offset);
        while let Some(i) = cur {
            chain.push(i);
            cur = self.blocks[i].parent;
        }
        chain.reverse();
        chain
    }

    pub fn innermost(&self, offset: usize) -> Option<usize> {
        // Blocks are in opening order; the last one that encloses wins.
        self.blocks
            .iter()
            .enumerate()
            .rev()
            .find(|(_, b)| b.encloses(offset, self.len))
            .map(|(i, _)| i)
    }

    pub fn depth_at(&self, offset: usize) -> usize {
        self.enclosing(offset).len()
    }

    /// Dotted declaration path around `offset`, e.g. `Query.addDoc`.
    pub fn scope_at(&self, offset: usize) -> String {
        self.enclosing(offset)
            .into_iter()
            .filter_map(|i| match &self.blocks[i].kind {
                BlockKind::Declaration { scope_name, .. } => Some(scope_name.as_str()),
                BlockKind::Control => None,
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn innermost_declaration(&self, offset: usize) -> Option<&Block> {
        self.enclosing(offset)
            .into_iter()
            .rev()
            .map(|i| &self.blocks[i])
            .find(|b| b.is_declaration())
    }

    /// Header starts of declaration blocks nested inside `within` (or at top
    /// level when `None`) whose header begins in `from..to`.
    pub fn nested_declaration_starts(
        &self,
        within: Option<usize>,
        from: usize,
        to: usize,
    ) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().filter_map(move |b| {
            let nested = match within {
                Some(w) => self.is_descendant(b, w),
                None => true,
            };
            (nested && b.is_declaration() && b.header_start >= from && b.header_start < to)
                .then_some(b.header_start)
        })
    }

    fn is_descendant(&self, b: &Block, ancestor: usize) -> bool {
        let mut cur = b.parent;
        while let Some(p) = cur {
            if p == ancestor {
                return true;
            }
            cur = self.blocks[p].parent;
        }
        false
    }
}

fn header_before(masked: &[u8], brace: usize) -> (usize, String) {
    // Semicolons inside parentheses (`for (;;)`) do not end the header.
    let mut start = brace;
    let mut parens = 0usize;
    while start > 0 {
        match masked[start - 1] {
            b')' => parens += 1,
            b'(' => parens = parens.saturating_sub(1),
            b';' | b'{' | b'}' if parens == 0 => break,
            _ => {}
        }
        start -= 1;
    }
    while start < brace && masked[start].is_ascii_whitespace() {
        start += 1;
    }
    let header = String::from_utf8_lossy(&masked[start..brace]).trim().to_string();
    (start, header)
}

fn identifiers(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        let ident = c.is_alphanumeric() || c == '_' || c == '$';
        match (ident, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.retain(|(_, w)| !w.starts_with(|c: char| c.is_ascii_digit()));
    out
}

fn classify(header: &str) -> BlockKind {
    let words = identifiers(header);
    let Some(&(_, first)) = words.first() else {
        return BlockKind::Control;
    };
    let trailing_operator = ["=", "->", "=>", ",", "(", "[", "?", ":"]
        .iter()
        .any(|op| header.ends_with(op));
    if header.starts_with(|c: char| !c.is_alphanumeric() && c != '_' && c != '@' && c != '$')
        || CONTROL_KEYWORDS.contains(&first)
        || trailing_operator
        || words.iter().any(|(_, w)| *w == "new")
    {
        return BlockKind::Control;
    }
    let name = declaration_name(header, &words).unwrap_or_else(|| first.to_string());
    BlockKind::Declaration {
        scope_name: name.clone(),
        name,
    }
}

fn declaration_name(header: &str, words: &[(usize, &str)]) -> Option<String> {
    if let Some(pos) = words.iter().position(|(_, w)| TYPE_KEYWORDS.contains(w)) {
        if words[pos].1 == "impl" {
            return words.last().map(|(_, w)| w.to_string());
        }
        return words.get(pos + 1).map(|(_, w)| w.to_string());
    }
    if words.iter().any(|(_, w)| *w == "impl") {
        return words.last().map(|(_, w)| w.to_string());
    }
    // Identifier directly before the first `(` that follows an identifier,
    // skipping annotations such as `@Override` or `@Foo(x)`.
    let bytes = header.as_bytes();
    let mut search_from = 0;
    while let Some(rel) = header[search_from..].find('(') {
        let paren = search_from + rel;
        let before = header[..paren].trim_end();
        let ident_start = before
            .rfind(|c: char| !(c.is_alphanumeric() || c == '_' || c == '$'))
            .map_or(0, |p| p + 1);
        let ident = &before[ident_start..];
        let is_annotation = ident_start > 0 && bytes[ident_start - 1] == b'@';
        if !ident.is_empty() && !is_annotation && !ident.starts_with(|c: char| c.is_ascii_digit()) {
            return Some(ident.to_string());
        }
        search_from = paren + 1;
    }
    words.last().map(|(_, w)| w.to_string())
}

fn assign_overload_ordinals(blocks: &mut [Block]) {
    use std::collections::HashMap;
    let mut counts: HashMap<(Option<usize>, String), usize> = HashMap::new();
    for i in 0..blocks.len() {
        let parent = declaration_parent(blocks, i);
        if let BlockKind::Declaration { name, scope_name } = &mut blocks[i].kind {
            let n = counts.entry((parent, name.clone())).or_insert(0);
            if *n > 0 {
                *scope_name = format!("{name}#{n}");
            }
            *n += 1;
        }
    }
}

fn declaration_parent(blocks: &[Block], i: usize) -> Option<usize> {
    let mut cur = blocks[i].parent;
    while let Some(p) = cur {
        if blocks[p].is_declaration() {
            return Some(p);
        }
        cur = blocks[p].parent;
    }
    None
}
