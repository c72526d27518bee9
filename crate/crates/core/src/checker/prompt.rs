//! Query construction and the replay key derived from it.

use crate::config::SyntaxProfile;
use crate::error::{Error, Result};
use crate::hash::sha256_hex;
use crate::model::{CodeLink, CommentNode};
use crate::structure::FileStructure;

pub const QUESTION: &str = "Does the comment at the top match the following code";

/// Builds the consistency query for `node`.
///
/// The subject is the smallest declaration that shows the comment together
/// with its code, copied verbatim:
///
/// * a comment inside a declaration body sends the whole declaration, from
///   its header to its closing brace;
/// * a comment directly above a declaration sends the comment and that
///   declaration;
/// * otherwise the comment and its code regions are sent as one span.
pub fn build_prompt(
    node: &CommentNode,
    link: Option<&CodeLink>,
    source: &str,
    profile: &SyntaxProfile,
) -> Result<String> {
    let link = link
        .filter(|l| !l.code_ranges.is_empty())
        .ok_or_else(|| Error::EmptyRegion(node.display_name()))?;
    let structure = FileStructure::analyze(source, profile);
    let comment_start = node.anchors.iter().map(|a| a.range.start).min().unwrap_or(0);
    let code_start = link.code_ranges[0].start;
    let code_end = link.code_ranges.iter().map(|r| r.end).max().unwrap_or(code_start);
    let len = source.len();

    let above = structure
        .blocks
        .iter()
        .find(|b| b.is_declaration() && b.header_start == code_start);
    let subject = if let Some(decl) = above {
        &source[comment_start..decl.interior_end(len).saturating_add(1).min(len).max(code_end)]
    } else if let Some(decl) = structure.innermost_declaration(comment_start) {
        &source[decl.header_start..decl.interior_end(len).saturating_add(1).min(len)]
    } else {
        &source[comment_start..code_end]
    };
    Ok(format!("{QUESTION}\n\n{subject}"))
}

/// Canonical form of a prompt for fixture lookup: trailing whitespace removed
/// from every line and trailing newlines dropped.
pub fn normalize_prompt(prompt: &str) -> String {
    let lines: Vec<&str> = prompt
        .split('\n')
        .map(|l| l.trim_end_matches([' ', '\t', '\r']))
        .collect();
    lines.join("\n").trim_end_matches('\n').to_string()
}

/// Hex SHA-256 of the normalized prompt; replay fixtures are named
/// `<hash>.txt`.
pub fn prompt_hash(prompt: &str) -> String {
    sha256_hex(normalize_prompt(prompt))
}
