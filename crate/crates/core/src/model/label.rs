use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A structured annotation tag such as `CS1.1` or `AS3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub prefix: String,
    pub path: Vec<u32>,
    pub raw: String,
}

impl Label {
    /// Returns `None` if the prefix is not an uppercase alphanumeric token or
    /// the path is empty.
    pub fn new(prefix: &str, path: Vec<u32>) -> Option<Self> {
        if path.is_empty() || !is_valid_prefix(prefix) {
            return None;
        }
        let raw = render(prefix, &path);
        Some(Self {
            prefix: prefix.to_string(),
            path,
            raw,
        })
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    /// True if `self` is a proper ancestor of `other` in the dotted numbering.
    pub fn is_ancestor_of(&self, other: &Label) -> bool {
        self.prefix == other.prefix
            && self.path.len() < other.path.len()
            && other.path.starts_with(&self.path)
    }
}

pub(crate) fn is_valid_prefix(prefix: &str) -> bool {
    !prefix.is_empty()
        && prefix.starts_with(|c: char| c.is_ascii_uppercase())
        && prefix
            .chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit())
}

fn render(prefix: &str, path: &[u32]) -> String {
    let nums: Vec<String> = path.iter().map(u32::to_string).collect();
    format!("{prefix}{}", nums.join("."))
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.prefix, &self.path))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prefix
            .cmp(&other.prefix)
            .then_with(|| self.path.cmp(&other.path))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_dotted_path() {
        let l = Label::new("CS", vec![1, 1]).unwrap();
        assert_eq!(l.raw, "CS1.1");
        assert_eq!(l.to_string(), "CS1.1");
        assert!(Label::new("CS", vec![]).is_none());
        assert!(Label::new("cs", vec![1]).is_none());
    }

    #[test]
    fn ordering_is_lexicographic_on_path() {
        let a = Label::new("CS", vec![1]).unwrap();
        let b = Label::new("CS", vec![1, 1]).unwrap();
        let c = Label::new("CS", vec![2]).unwrap();
        let d = Label::new("CS", vec![10]).unwrap();
        assert!(a < b && b < c && c < d);
        assert!(a.is_ancestor_of(&b));
        assert!(!b.is_ancestor_of(&a));
        assert!(!a.is_ancestor_of(&a));
    }
}
