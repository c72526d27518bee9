//! Human-friendly node selectors: `LABEL@file[:scope]`.

use crate::error::{Error, Result};
use crate::model::{CommentNode, NodeId, Snapshot};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selector {
    pub label: String,
    pub file: String,
    pub scope: Option<String>,
}

impl Selector {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::BadSelector(text.to_string());
        let (label, rest) = text.split_once('@').ok_or_else(bad)?;
        let (file, scope) = match rest.split_once(':') {
            Some((f, s)) => (f, Some(s)),
            None => (rest, None),
        };
        if label.is_empty() || file.is_empty() || scope.is_some_and(str::is_empty) {
            return Err(bad());
        }
        Ok(Self {
            label: label.to_string(),
            file: file.to_string(),
            scope: scope.map(str::to_string),
        })
    }

    fn matches_file(&self, path: &str) -> bool {
        path == self.file || path.ends_with(&format!("/{}", self.file))
    }

    fn matches_scope(&self, scope: &str) -> bool {
        let Some(hint) = &self.scope else { return true };
        let last = scope.rsplit('.').next().unwrap_or(scope);
        let plain = |s: &str| s.split('#').next().unwrap_or(s).to_string();
        scope == hint
            || scope.ends_with(&format!(".{hint}"))
            || last == hint
            || plain(last) == *hint
    }
}

/// Resolves a selector, or a raw node id, to exactly one node of
/// `snapshot`.
pub fn resolve<'a>(text: &str, snapshot: &'a Snapshot) -> Result<(&'a str, &'a CommentNode)> {
    if !text.contains('@') {
        let id = NodeId(text.to_string());
        return snapshot.find_node(&id).ok_or_else(|| {
            if text.len() == 16 && text.chars().all(|c| c.is_ascii_hexdigit()) {
                Error::NoSuchNode {
                    selector: text.to_string(),
                }
            } else {
                Error::BadSelector(text.to_string())
            }
        });
    }
    let sel = Selector::parse(text)?;
    let hits: Vec<(&str, &CommentNode)> = snapshot
        .files
        .iter()
        .filter(|(path, _)| sel.matches_file(path))
        .flat_map(|(path, entry)| entry.all_nodes().map(move |n| (path.as_str(), n)))
        .filter(|(_, n)| n.label.raw == sel.label && sel.matches_scope(&n.scope))
        .collect();
    match hits.len() {
        0 => Err(Error::NoSuchNode {
            selector: text.to_string(),
        }),
        1 => Ok(hits[0]),
        _ => Err(Error::AmbiguousSelector {
            selector: text.to_string(),
            candidates: hits
                .iter()
                .map(|(path, n)| format!("{}@{}:{}", n.label.raw, path, n.scope))
                .collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::tracker::scan_project;

    fn snap() -> (tempfile::TempDir, Snapshot) {
        let dir = tempfile::tempdir().unwrap();
        corpus::write_corpus(dir.path(), corpus::Variant::Original).unwrap();
        let s = scan_project(dir.path(), &crate::Config::default()).unwrap();
        (dir, s)
    }

    #[test]
    fn parse_forms() {
        assert_eq!(
            Selector::parse("CS1@Query.java:addDoc").unwrap(),
            Selector {
                label: "CS1".into(),
                file: "Query.java".into(),
                scope: Some("addDoc".into())
            }
        );
        assert!(Selector::parse("CS1@Query.java").unwrap().scope.is_none());
        for bad in ["CS1", "@Query.java", "CS1@", "CS1@Q.java:"] {
            assert!(matches!(Selector::parse(bad), Err(Error::BadSelector(_))), "{bad}");
        }
    }

    #[test]
    fn resolves_with_scope_hints() {
        let (_d, s) = snap();
        let (_, n) = resolve("CS1@Query.java:addDoc", &s).unwrap();
        assert_eq!(n.display_name(), "CS1@Query.addDoc");
        let (_, n) = resolve("SP1@Query.java:Query", &s).unwrap();
        assert_eq!(n.scope, "Query.Query#1");
        let (_, n) = resolve("CS3@Query.java:Query.addKey", &s).unwrap();
        assert_eq!(n.scope, "Query.addKey");
        let (_, again) = resolve(n.id.as_str(), &s).unwrap();
        assert_eq!(again.id, n.id);
    }

    #[test]
    fn ambiguity_lists_candidates() {
        let (_d, s) = snap();
        match resolve("CS1@Query.java", &s) {
            Err(Error::AmbiguousSelector { candidates, .. }) => {
                assert!(candidates.contains(&"CS1@Query.java:Query.addDoc".to_string()));
                assert_eq!(candidates.len(), 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(resolve("CS9@Query.java", &s), Err(Error::NoSuchNode { .. })));
        assert!(matches!(resolve("0123456789abcdef", &s), Err(Error::NoSuchNode { .. })));
    }
}
