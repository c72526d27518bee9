use crate::config::PatternConfig;
use crate::model::{Clause, ClauseKeyword};

/// Splits a comment body into specification clauses. A clause starts at a
/// line beginning with a configured keyword (case-insensitive) followed by
/// `:`, and runs to the next such line. Text before the first keyword and
/// clauses with empty text are dropped.
pub fn parse_clauses(body: &str, config: &PatternConfig) -> Vec<Clause> {
    let mut keywords: Vec<(&str, bool)> = config
        .clause_keywords
        .iter()
        .map(|k| (k.as_str(), false))
        .chain(config.custom_tags.iter().map(|k| (k.as_str(), true)))
        .collect();
    keywords.sort_by_key(|(k, _)| std::cmp::Reverse(k.len()));

    let mut clauses = Vec::new();
    let mut current: Option<(ClauseKeyword, String)> = None;
    for line in body.lines() {
        if let Some((keyword, rest)) = heading(line, &keywords) {
            flush(&mut clauses, current.take());
            current = Some((keyword, rest.to_string()));
        } else if let Some((_, text)) = current.as_mut() {
            text.push('\n');
            text.push_str(line);
        }
    }
    flush(&mut clauses, current);
    clauses
}

fn heading<'a>(line: &'a str, keywords: &[(&str, bool)]) -> Option<(ClauseKeyword, &'a str)> {
    let text = line.trim_start();
    keywords.iter().find_map(|&(kw, custom)| {
        let head = text.get(..kw.len())?;
        if !head.eq_ignore_ascii_case(kw) {
            return None;
        }
        let rest = text[kw.len()..].trim_start_matches([' ', '\t']).strip_prefix(':')?;
        let keyword = if custom {
            ClauseKeyword::Other(head.to_string())
        } else {
            ClauseKeyword::canonical(kw).unwrap_or_else(|| ClauseKeyword::Other(head.to_string()))
        };
        Some((keyword, rest))
    })
}

fn flush(out: &mut Vec<Clause>, clause: Option<(ClauseKeyword, String)>) {
    if let Some((keyword, text)) = clause {
        let text = text.trim();
        if !text.is_empty() {
            out.push(Clause {
                keyword,
                text: text.to_string(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(body: &str) -> Vec<String> {
        parse_clauses(body, &PatternConfig::default())
            .into_iter()
            .map(|c| c.keyword.to_string())
            .collect()
    }

    #[test]
    fn requires_modifies_effects() {
        let body = "REQUIRES: d is not null and h maps strings (the\n   interesting words in d) to integers\nMODIFIES: this\nEFFECTS: If each keyword of this is in h,\n              adds d to the matches of this.";
        let clauses = parse_clauses(body, &PatternConfig::default());
        assert_eq!(kinds(body), vec!["REQUIRES", "MODIFIES", "EFFECTS"]);
        assert!(clauses[0].text.starts_with("d is not null"));
        assert!(clauses[0].text.ends_with("to integers"));
        assert_eq!(clauses[1].text, "this");
    }

    #[test]
    fn prose_has_no_clauses() {
        assert!(kinds("just prose").is_empty());
    }

    #[test]
    fn sketch_synonyms_and_empty_headings() {
        let engine_ctor = "EFFECTS: If the uninteresting words cannot be read from the private file\nthrows NotPossibleException\n\nIMPL SKETCH:\nwt := WordTable()";
        assert_eq!(kinds(engine_ctor), vec!["EFFECTS", "SKETCH"]);
        assert_eq!(kinds("HELPS: x\nCode sketch:"), vec!["HELPS"]);
        assert_eq!(kinds("impl: do it"), vec!["SKETCH"]);
        assert_eq!(kinds("sketch : a"), vec!["SKETCH"]);
    }

    #[test]
    fn custom_tags_keep_case() {
        let c = parse_clauses("todo: tidy up", &PatternConfig::default());
        assert_eq!(c[0].keyword, ClauseKeyword::Other("todo".into()));
        assert_eq!(c[0].text, "tidy up");
    }

    #[test]
    fn keyword_must_lead_the_line() {
        assert!(kinds("this REQUIRES: nothing").is_empty());
        assert!(kinds("REQUIRESX: nothing").is_empty());
    }
}
