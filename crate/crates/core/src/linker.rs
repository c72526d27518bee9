//! Binds labeled comments to the code they document.
//!
//! # Binding rule
//!
//! For each anchor of a node, the region starts at the first code character
//! after the comment. If a labeled comment or the end of the enclosing block
//! comes first, the anchor is sketch-only. Unlabeled comments in between are
//! skipped. The region then extends up to, exclusively, the earliest of:
//!
//! * the next labeled comment at the same or a shallower brace depth (or any
//!   other anchor of the same node),
//! * the header of a declaration nested in the enclosing block that begins
//!   after the region start (so a class-level comment covers the fields that
//!   follow it, not the methods below),
//! * the closing brace of the enclosing block,
//! * end of file.
//!
//! Trailing blank and comment-only lines are trimmed off. A node's region is
//! the union of its anchors' regions; a node whose anchors are all
//! sketch-only gets no [`CodeLink`]. When braces do not balance, only labeled
//! comments and end of file terminate regions.

use std::collections::BTreeMap;

use crate::config::{Config, SyntaxProfile};
use crate::hash::sha256_hex;
use crate::lexer::{segments, Segment, SegmentKind};
use crate::model::{
    CodeLink, CommentNode, CommentTree, Diagnostic, DiagnosticKind, LineIndex, Severity, SourceRange,
};
use crate::parser::{parse_file, ParsedFile};

/// Code region documented by `node`: one range per anchor that has code,
/// sorted and merged. Empty for sketch-only nodes.
pub fn infer_code_region(node: &CommentNode, parsed: &ParsedFile, source: &str) -> Vec<SourceRange> {
    let index = LineIndex::new(source);
    let mut ranges: Vec<SourceRange> = node
        .anchors
        .iter()
        .filter_map(|a| anchor_region(node, a.range, parsed, source, &index))
        .collect();
    ranges.sort();
    let mut merged: Vec<SourceRange> = Vec::with_capacity(ranges.len());
    for r in ranges {
        match merged.last_mut() {
            Some(last) if last.end >= r.start => {
                if r.end > last.end {
                    last.end = r.end;
                    last.end_line = r.end_line;
                }
            }
            _ => merged.push(r),
        }
    }
    merged
}

fn anchor_region(
    node: &CommentNode,
    comment: SourceRange,
    parsed: &ParsedFile,
    source: &str,
    index: &LineIndex,
) -> Option<SourceRange> {
    let st = &parsed.structure;
    let segs = &st.segments;
    let len = source.len();
    let balanced = st.balanced;
    let block = if balanced { st.innermost(comment.start) } else { None };
    let block_end = block.map_or(len, |b| st.blocks[b].interior_end(len));
    let depth = st.depth_at(comment.start);

    let labeled_after = parsed
        .labeled()
        .map(|r| r.range.start)
        .filter(|&s| s >= comment.end)
        .collect::<Vec<_>>();

    // First code character after the comment.
    let code_start = first_code_char(source, segs, comment.end, block_end)?;
    if labeled_after.iter().any(|&s| s < code_start) {
        return None;
    }

    let mut end = block_end;
    for s in labeled_after.into_iter().filter(|&s| s > code_start) {
        if !balanced || st.depth_at(s) <= depth {
            end = end.min(s);
            break;
        }
    }
    for a in &node.anchors {
        if a.range.start > code_start {
            end = end.min(a.range.start);
        }
    }
    if balanced {
        if let Some(next_decl) = st
            .nested_declaration_starts(block, code_start + 1, end)
            .filter(|&h| st.depth_at(h) == depth)
            .min()
        {
            end = end.min(next_decl);
        }
    }

    let last = last_code_char(source, segs, code_start, end)?;
    let line_end = index.line_end(index.line_of(last)).min(end);
    let trimmed_end = code_start + source[code_start..line_end].trim_end().len();
    SourceRange::new(index, code_start, trimmed_end.max(last + 1))
}

fn code_chars<'a>(
    source: &'a str,
    segs: &'a [Segment],
    from: usize,
    to: usize,
) -> impl DoubleEndedIterator<Item = usize> + 'a {
    segs.iter()
        .filter(move |s| matches!(s.kind, SegmentKind::Code | SegmentKind::Str) && s.end > from && s.start < to)
        .flat_map(move |s| {
            let lo = s.start.max(from);
            let hi = s.end.min(to);
            source[lo..hi]
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .map(move |(i, _)| lo + i)
                .collect::<Vec<_>>()
        })
}

fn first_code_char(source: &str, segs: &[Segment], from: usize, to: usize) -> Option<usize> {
    code_chars(source, segs, from, to).next()
}

fn last_code_char(source: &str, segs: &[Segment], from: usize, to: usize) -> Option<usize> {
    code_chars(source, segs, from, to).next_back()
}

/// Normalizes code for fingerprinting: comments removed, whitespace runs
/// outside string literals collapsed to one space, ends trimmed. String
/// literal contents are kept verbatim.
pub fn normalize_code(code: &str, profile: &SyntaxProfile) -> String {
    let mut out = String::with_capacity(code.len());
    let mut pending_space = false;
    for seg in segments(code, profile) {
        let text = &code[seg.start..seg.end];
        match seg.kind {
            SegmentKind::LineComment | SegmentKind::BlockComment { .. } => pending_space = true,
            SegmentKind::Str => {
                if pending_space && !out.is_empty() {
                    out.push(' ');
                }
                pending_space = false;
                out.push_str(text);
            }
            SegmentKind::Code => {
                for c in text.chars() {
                    if c.is_whitespace() {
                        pending_space = true;
                    } else {
                        if pending_space && !out.is_empty() {
                            out.push(' ');
                        }
                        pending_space = false;
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// SHA-256 of the normalized code, hex encoded.
pub fn fingerprint(code: &str, profile: &SyntaxProfile) -> String {
    sha256_hex(normalize_code(code, profile))
}

/// Fingerprint of a multi-segment region.
pub fn fingerprint_segments<'a>(parts: impl IntoIterator<Item = &'a str>, profile: &SyntaxProfile) -> String {
    let normalized: Vec<String> = parts.into_iter().map(|p| normalize_code(p, profile)).collect();
    sha256_hex(normalized.join("\n"))
}

/// Links every node of a parsed file. Reports unbalanced braces once.
pub fn link_file(parsed: &ParsedFile, source: &str, profile: &SyntaxProfile) -> (Vec<CodeLink>, Vec<Diagnostic>) {
    link_nodes(parsed.nodes(), parsed, source, profile)
}

fn link_nodes<'a>(
    nodes: impl Iterator<Item = &'a CommentNode>,
    parsed: &ParsedFile,
    source: &str,
    profile: &SyntaxProfile,
) -> (Vec<CodeLink>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    if !parsed.structure.balanced {
        diags.push(Diagnostic::grammar(
            &parsed.file,
            None,
            "unbalanced braces; code regions end only at the next labeled comment or end of file",
        ));
    }
    let links = nodes
        .filter_map(|node| {
            let ranges = infer_code_region(node, parsed, source);
            if ranges.is_empty() {
                return None;
            }
            Some(CodeLink {
                node_id: node.id.clone(),
                code_fingerprint: fingerprint_segments(ranges.iter().map(|r| r.slice(source)), profile),
                code_ranges: ranges,
            })
        })
        .collect();
    (links, diags)
}

/// Links every node of `tree` against the current `sources`. Nodes whose
/// file is missing produce a `BrokenLink` each and no link.
pub fn link_all(
    tree: &CommentTree,
    sources: &BTreeMap<String, String>,
    config: &Config,
) -> (Vec<CodeLink>, Vec<Diagnostic>) {
    let mut links = Vec::new();
    let mut diags = Vec::new();
    for (file, roots) in &tree.per_file {
        let nodes = crate::model::walk_forest(roots);
        match sources.get(file) {
            Some(source) => {
                let parsed = parse_file(file, source, config);
                let (l, d) = link_nodes(nodes, &parsed, source, &config.syntax);
                links.extend(l);
                diags.extend(d);
            }
            None => diags.extend(nodes.map(|n| broken_link(file, n))),
        }
    }
    (links, diags)
}

pub(crate) fn broken_link(file: &str, node: &CommentNode) -> Diagnostic {
    Diagnostic {
        kind: DiagnosticKind::BrokenLink,
        node_id: Some(node.id.clone()),
        node: Some(node.display_name()),
        file: file.to_string(),
        comment_range: Some(node.first_anchor().range),
        code_ranges: Vec::new(),
        message: format!("{} refers to a file that no longer exists", node.display_name()),
        severity: Severity::Error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> SyntaxProfile {
        SyntaxProfile::default()
    }

    fn regions(src: &str) -> Vec<(String, Vec<String>)> {
        let cfg = Config::default();
        let parsed = parse_file("t.java", src, &cfg);
        parsed
            .nodes()
            .map(|n| {
                let r = infer_code_region(n, &parsed, src);
                (n.label.raw.clone(), r.iter().map(|r| r.slice(src).to_string()).collect())
            })
            .collect()
    }

    #[test]
    fn annotation_binds_to_following_statement() {
        let src = "//CS1.1: Initialize the database connection\nDatabase db = new Database(config);";
        assert_eq!(
            regions(src),
            vec![("CS1.1".to_string(), vec!["Database db = new Database(config);".to_string()])]
        );
    }

    #[test]
    fn trailing_label_is_sketch_only() {
        let src = "x();\n//CS9: nothing after\n";
        assert_eq!(regions(src), vec![("CS9".to_string(), vec![])]);
    }

    #[test]
    fn stops_at_block_end_and_next_label() {
        let src = "void f() {\n  //CS1: a\n  a();\n  // note\n  //CS2: b\n  b();\n  if (x) {\n    //CS2.1: inner\n    c();\n  }\n  // tail\n}\nafter();\n";
        let r = regions(src);
        assert_eq!(r[0].1, vec!["a();"]);
        assert_eq!(r[1].0, "CS2");
        assert_eq!(r[1].1, vec!["b();\n  if (x) {\n    //CS2.1: inner\n    c();\n  }"]);
        assert_eq!(r[2].1, vec!["c();"]);
    }

    #[test]
    fn unlabeled_comments_do_not_end_sketch_lines() {
        let src = "void f() {\n  //CS1: plan\n\n  // Level 2 sketch\n  // more\n\n  go();\n}\n";
        assert_eq!(regions(src)[0].1, vec!["go();"]);
    }

    #[test]
    fn class_comment_stops_at_nested_declaration() {
        let src = "class A {\n  //CS1: fields\n  int a;\n  int b;\n  // Constructors\n  A() {\n    a = 1;\n  }\n}\n";
        assert_eq!(regions(src)[0].1, vec!["int a;\n  int b;"]);
    }

    #[test]
    fn comment_directly_above_method_covers_it() {
        let src = "class A {\n  //CS1: the method\n  void m() {\n    x();\n  }\n  int y;\n}\n";
        assert_eq!(regions(src)[0].1, vec!["void m() {\n    x();\n  }\n  int y;"]);
    }

    #[test]
    fn multi_anchor_union() {
        let src = "void f() {\n  //CS1: step\n  //CS2: other\n\n  //CS1: step\n  a();\n  //CS2: other\n  b();\n}\n";
        let r = regions(src);
        assert_eq!(r[0].1, vec!["a();"]);
        assert_eq!(r[1].1, vec!["b();"]);
    }

    #[test]
    fn unbalanced_braces_fall_back() {
        let src = "void f() {\n  //CS1: a\n  a();\n  }\n  }\n  more();\n//CS2: b\nb();\n";
        let cfg = Config::default();
        let parsed = parse_file("t.java", src, &cfg);
        assert!(!parsed.structure.balanced);
        let (links, diags) = link_file(&parsed, src, &cfg.syntax);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::GrammarViolation);
        let r0 = links[0].code_ranges[0].slice(src);
        assert!(r0.starts_with("a();") && r0.ends_with("more();"));
    }

    #[test]
    fn fingerprint_examples() {
        let p = profile();
        assert_eq!(fingerprint("int  x = 1;", &p), fingerprint("int x = 1;", &p));
        assert_eq!(fingerprint("int x = 1; // note", &p), fingerprint("int x = 1;", &p));
        assert_ne!(fingerprint("if (b) return;", &p), fingerprint("if (!b) return;", &p));
        assert_eq!(fingerprint("", &p).len(), 64);
    }

    #[test]
    fn strings_are_preserved_verbatim() {
        let p = profile();
        assert_eq!(normalize_code("s = \"a   b\" ;\n\n x", &p), "s = \"a   b\" ; x");
        assert_ne!(fingerprint("s = \"a b\";", &p), fingerprint("s = \"a  b\";", &p));
        assert_eq!(normalize_code("a /* c */ b", &p), "a b");
    }

    #[test]
    fn link_all_reports_missing_files() {
        let cfg = Config::default();
        let src = "//CS1: a\nx();\n//CS2: b\n";
        let parsed = parse_file("gone.java", src, &cfg);
        let mut tree = CommentTree::default();
        tree.per_file.insert("gone.java".into(), parsed.roots.clone());
        let (links, diags) = link_all(&tree, &BTreeMap::new(), &cfg);
        assert!(links.is_empty());
        assert_eq!(diags.len(), 2);
        assert!(diags.iter().all(|d| d.kind == DiagnosticKind::BrokenLink));

        let mut sources = BTreeMap::new();
        sources.insert("gone.java".to_string(), src.to_string());
        let (links, diags) = link_all(&tree, &sources, &cfg);
        assert_eq!(links.len(), 1);
        assert!(diags.is_empty());
        assert!(link_all(&CommentTree::default(), &sources, &cfg).0.is_empty());
    }
}
