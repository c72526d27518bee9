use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{walk_forest, Diagnostic, CodeLink, CommentNode, CommentRecord, NodeId};

pub const SCHEMA_VERSION: u32 = 1;

/// Persisted project state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Snapshot {
    pub schema_version: u32,
    pub project_root: String,
    pub created_at: DateTime<Utc>,
    pub files: BTreeMap<String, FileEntry>,
    #[serde(default)]
    pub acknowledged: BTreeSet<Acknowledgement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FileEntry {
    pub file_hash: String,
    pub records: Vec<CommentRecord>,
    pub links: Vec<CodeLink>,
    /// Root nodes of the file's comment forest.
    #[serde(default)]
    pub nodes: Vec<CommentNode>,
    /// Grammar violations found while parsing the file.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl FileEntry {
    pub fn link(&self, id: &NodeId) -> Option<&CodeLink> {
        self.links.iter().find(|l| &l.node_id == id)
    }

    pub fn all_nodes(&self) -> impl Iterator<Item = &CommentNode> {
        walk_forest(&self.nodes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Acknowledgement {
    pub node_id: NodeId,
    pub code_fingerprint: String,
}

impl Snapshot {
    pub fn is_acknowledged(&self, id: &NodeId, fingerprint: &str) -> bool {
        self.acknowledged.iter().any(|a| &a.node_id == id && a.code_fingerprint == fingerprint)
    }

    pub fn find_node(&self, id: &NodeId) -> Option<(&str, &CommentNode)> {
        self.files.iter().find_map(|(path, entry)| {
            entry.all_nodes().find(|n| &n.id == id).map(|n| (path.as_str(), n))
        })
    }
}
