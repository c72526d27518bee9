//! The bundled search-engine corpus used for demos and tests.

use std::path::Path;

use crate::error::{Error, Result};

/// `(file name, contents)` of every corpus file.
pub const FILES: &[(&str, &str)] = &[
    ("Doc.java", include_str!("../fixtures/corpus/Doc.java")),
    ("DocCnt.java", include_str!("../fixtures/corpus/DocCnt.java")),
    ("Engine.java", include_str!("../fixtures/corpus/Engine.java")),
    ("Query.java", include_str!("../fixtures/corpus/Query.java")),
    ("TitleTable.java", include_str!("../fixtures/corpus/TitleTable.java")),
    ("WordTable.java", include_str!("../fixtures/corpus/WordTable.java")),
];

const WITHOUT_ASSERTIONS_PATCH: &str = include_str!("../fixtures/patches/adddoc_without_assertions.patch");
const SEEDED_BUG_PATCH: &str = include_str!("../fixtures/patches/adddoc_seeded_bug.patch");

/// Variants of `Query.java`; all other files are shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Original,
    /// `addDoc` with its inline assertion comments stripped.
    WithoutAssertions,
    /// `addDoc` with its early return inverted (`if (b) return;`).
    SeededBug,
}

impl Variant {
    fn patch(self) -> Option<&'static str> {
        match self {
            Variant::Original => None,
            Variant::WithoutAssertions => Some(WITHOUT_ASSERTIONS_PATCH),
            Variant::SeededBug => Some(SEEDED_BUG_PATCH),
        }
    }
}

/// Applies a unified diff to `base`.
pub fn apply_patch(base: &str, patch: &str) -> Result<String> {
    let patch = diffy::Patch::from_str(patch).map_err(|e| Error::Patch(e.to_string()))?;
    diffy::apply(base, &patch).map_err(|e| Error::Patch(e.to_string()))
}

pub fn original(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// `Query.java` in the given variant.
pub fn query_source(variant: Variant) -> Result<String> {
    let base = original("Query.java").expect("bundled");
    match variant.patch() {
        None => Ok(base.to_string()),
        Some(p) => apply_patch(base, p),
    }
}

/// Writes the corpus into `dir`.
pub fn write_corpus(dir: &Path, variant: Variant) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, text) in FILES {
        let path = dir.join(name);
        let text = if *name == "Query.java" {
            query_source(variant)?
        } else {
            text.to_string()
        };
        std::fs::write(&path, text).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patches_apply() {
        let bug = query_source(Variant::SeededBug).unwrap();
        assert!(bug.contains("        if (b) return;"));
        assert!(!bug.contains("if (!b) return;"));
        let clean = query_source(Variant::WithoutAssertions).unwrap();
        assert!(!clean.contains("//{b}"));
        assert!(clean.contains("if (!b) return;"));
    }

    #[test]
    fn bad_patch_is_an_error() {
        assert!(matches!(apply_patch("x\n", SEEDED_BUG_PATCH), Err(Error::Patch(_))));
    }
}
