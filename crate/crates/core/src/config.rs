//! Project configuration, loaded from `codat.toml` at the project root.
//!
//! Every section and key is optional; missing values fall back to the
//! built-in defaults (C-family comment syntax, `CS`/`AS`/`SP` labels).

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::is_valid_prefix;

pub const CONFIG_FILE: &str = "codat.toml";

/// Comment and string syntax of the scanned language family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntaxProfile {
    pub line_comment: String,
    pub block_comment_open: String,
    pub block_comment_close: String,
    pub string_delimiters: Vec<String>,
    pub extensions: Vec<String>,
}

impl Default for SyntaxProfile {
    fn default() -> Self {
        Self {
            line_comment: "//".into(),
            block_comment_open: "/*".into(),
            block_comment_close: "*/".into(),
            string_delimiters: vec!["\"".into(), "'".into()],
            extensions: ["java", "kt", "c", "h", "cc", "cpp", "hpp", "cs", "js", "ts", "go", "swift", "scala"]
                .into_iter()
                .map(String::from)
                .collect(),
        }
    }
}

impl SyntaxProfile {
    pub fn validate(&self) -> Result<()> {
        if self.line_comment.is_empty()
            || self.block_comment_open.is_empty()
            || self.block_comment_close.is_empty()
        {
            return Err(Error::Config("comment tokens must be non-empty".into()));
        }
        if self.string_delimiters.iter().any(String::is_empty) {
            return Err(Error::Config("string delimiters must be non-empty".into()));
        }
        Ok(())
    }

    pub fn matches(&self, path: &Path) -> bool {
        path.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|ext| self.extensions.iter().any(|e| e.eq_ignore_ascii_case(ext)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelPattern {
    pub prefix: String,
    #[serde(default)]
    pub description: String,
}

/// Which comment labels and clause headings are recognized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatternConfig {
    pub label_patterns: Vec<LabelPattern>,
    pub clause_keywords: Vec<String>,
    pub custom_tags: Vec<String>,
    /// When set, a label must be followed by `:`; otherwise whitespace also
    /// terminates the tag (`//CS2  that match ...`).
    pub require_colon: bool,
}

impl Default for PatternConfig {
    fn default() -> Self {
        let label = |p: &str, d: &str| LabelPattern {
            prefix: p.into(),
            description: d.into(),
        };
        Self {
            label_patterns: vec![
                label("CS", "code sketch step"),
                label("AS", "Hoare-logic assertion"),
                label("SP", "specification clause"),
            ],
            clause_keywords: [
                "OVERVIEW",
                "REQUIRES",
                "MODIFIES",
                "EFFECTS",
                "HELPS",
                "IMPL SKETCH",
                "Code sketch",
                "SKETCH",
                "IMPL",
            ]
            .into_iter()
            .map(String::from)
            .collect(),
            custom_tags: vec!["TODO".into()],
            require_colon: false,
        }
    }
}

impl PatternConfig {
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for p in &self.label_patterns {
            if !is_valid_prefix(&p.prefix) {
                return Err(Error::Config(format!(
                    "label prefix `{}` must be uppercase alphanumeric",
                    p.prefix
                )));
            }
            if !seen.insert(p.prefix.as_str()) {
                return Err(Error::Config(format!("duplicate label prefix `{}`", p.prefix)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WatchConfig {
    pub debounce_ms: u64,
    pub poll_interval_ms: u64,
}

impl Default for WatchConfig {
    fn default() -> Self {
        Self {
            debounce_ms: 300,
            poll_interval_ms: 2000,
        }
    }
}

impl WatchConfig {
    pub fn debounce(&self) -> Duration {
        Duration::from_millis(self.debounce_ms)
    }

    pub fn poll_interval(&self) -> Duration {
        Duration::from_millis(self.poll_interval_ms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub parallelism: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { parallelism: 2 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub syntax: SyntaxProfile,
    pub patterns: PatternConfig,
    pub watch: WatchConfig,
    pub check: CheckConfig,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.syntax.validate()?;
        cfg.patterns.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Loads `explicit` if given, else `<root>/codat.toml` if present, else
    /// the defaults.
    pub fn discover(root: &Path, explicit: Option<&Path>) -> Result<Self> {
        match explicit {
            Some(p) => Self::load(p),
            None => {
                let candidate: PathBuf = root.join(CONFIG_FILE);
                if candidate.is_file() {
                    Self::load(&candidate)
                } else {
                    Ok(Self::default())
                }
            }
        }
    }
}
