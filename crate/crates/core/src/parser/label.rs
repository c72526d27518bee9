use crate::config::PatternConfig;
use crate::model::Label;

/// Parses a label at the start of a comment body: a configured prefix, a
/// dotted number path, then `:` (or whitespace, unless the config requires a
/// colon). Leading whitespace is skipped.
pub fn parse_label(body: &str, config: &PatternConfig) -> Option<Label> {
    split_label(body, config).map(|(label, _)| label)
}

/// Like [`parse_label`], also returning the text after the tag (and its
/// colon, when present).
pub fn split_label<'a>(body: &'a str, config: &PatternConfig) -> Option<(Label, &'a str)> {
    let text = body.trim_start();
    let mut prefixes: Vec<&str> = config.label_patterns.iter().map(|p| p.prefix.as_str()).collect();
    prefixes.sort_by_key(|p| std::cmp::Reverse(p.len()));
    prefixes.into_iter().find_map(|prefix| {
        let after = text.strip_prefix(prefix)?;
        let (path, rest) = parse_path(after)?;
        let rest = if let Some(r) = rest.strip_prefix(':') {
            r
        } else if !config.require_colon && rest.starts_with(char::is_whitespace) && !rest.trim().is_empty() {
            rest
        } else {
            return None;
        };
        Some((Label::new(prefix, path)?, rest))
    })
}

/// Greedy `\d+(\.\d+)*`. Components with leading zeros are rejected.
fn parse_path(s: &str) -> Option<(Vec<u32>, &str)> {
    let mut path = Vec::new();
    let mut rest = s;
    loop {
        let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 {
            return None;
        }
        let (num, tail) = rest.split_at(digits);
        if num.len() > 1 && num.starts_with('0') {
            return None;
        }
        path.push(num.parse().ok()?);
        rest = tail;
        match rest.strip_prefix('.') {
            Some(t) if t.starts_with(|c: char| c.is_ascii_digit()) => rest = t,
            _ => return Some((path, rest)),
        }
    }
}
