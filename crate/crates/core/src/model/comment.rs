use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Label, SourceRange};

/// Keyword heading a specification clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseKeyword {
    Overview,
    Requires,
    Modifies,
    Effects,
    Helps,
    Sketch,
    /// A custom tag, spelled as it appeared in the comment.
    Other(String),
}

impl ClauseKeyword {
    pub fn as_str(&self) -> &str {
        match self {
            ClauseKeyword::Overview => "OVERVIEW",
            ClauseKeyword::Requires => "REQUIRES",
            ClauseKeyword::Modifies => "MODIFIES",
            ClauseKeyword::Effects => "EFFECTS",
            ClauseKeyword::Helps => "HELPS",
            ClauseKeyword::Sketch => "SKETCH",
            ClauseKeyword::Other(s) => s,
        }
    }

    /// Canonical keyword for a recognized heading, if any. Sketch synonyms all
    /// map to [`ClauseKeyword::Sketch`].
    pub fn canonical(heading: &str) -> Option<Self> {
        let upper = heading.split_whitespace().collect::<Vec<_>>().join(" ");
        Some(match upper.to_ascii_uppercase().as_str() {
            "OVERVIEW" => ClauseKeyword::Overview,
            "REQUIRES" => ClauseKeyword::Requires,
            "MODIFIES" => ClauseKeyword::Modifies,
            "EFFECTS" => ClauseKeyword::Effects,
            "HELPS" => ClauseKeyword::Helps,
            "SKETCH" | "IMPL SKETCH" | "CODE SKETCH" | "IMPL" => ClauseKeyword::Sketch,
            _ => return None,
        })
    }
}

impl fmt::Display for ClauseKeyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ClauseKeyword {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ClauseKeyword {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(match s.as_str() {
            "OVERVIEW" => ClauseKeyword::Overview,
            "REQUIRES" => ClauseKeyword::Requires,
            "MODIFIES" => ClauseKeyword::Modifies,
            "EFFECTS" => ClauseKeyword::Effects,
            "HELPS" => ClauseKeyword::Helps,
            "SKETCH" => ClauseKeyword::Sketch,
            _ => ClauseKeyword::Other(s),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub keyword: ClauseKeyword,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CommentKind {
    Line,
    Block,
}

/// One extracted comment. Stacked line comments may be coalesced into a
/// single record whose body joins the per-line bodies with `\n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommentRecord {
    pub file: String,
    pub kind: CommentKind,
    pub range: SourceRange,
    pub body: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<Clause>,
    /// Enclosing declaration scope, e.g. `Query.addDoc`.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub scope: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_id: Option<NodeId>,
}

/// Stable node identifier (hex digest prefix).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AnchorStatus {
    Valid,
    Relocated,
    Orphaned,
}

/// Content-addressed reference to a comment's location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Anchor {
    pub file: String,
    pub range: SourceRange,
    pub text_hash: String,
    pub context_hash: String,
    pub status: AnchorStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommentNode {
    pub id: NodeId,
    pub label: Label,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub scope: String,
    pub anchors: Vec<Anchor>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<Clause>,
    #[serde(default)]
    pub children: Vec<CommentNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<NodeId>,
}

impl CommentNode {
    pub fn first_anchor(&self) -> &Anchor {
        &self.anchors[0]
    }

    /// Pre-order walk over this node and its descendants.
    pub fn walk(&self) -> impl Iterator<Item = &CommentNode> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }

    /// Human-facing name: `CS1@Query.addDoc`.
    pub fn display_name(&self) -> String {
        if self.scope.is_empty() {
            self.label.raw.clone()
        } else {
            format!("{}@{}", self.label.raw, self.scope)
        }
    }
}

/// Walks every node of a forest in pre-order.
pub fn walk_forest(roots: &[CommentNode]) -> impl Iterator<Item = &CommentNode> {
    roots.iter().flat_map(CommentNode::walk)
}

/// The per-file forest of labeled documentation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommentTree {
    pub per_file: BTreeMap<String, Vec<CommentNode>>,
    pub unlabeled: Vec<CommentRecord>,
}

impl CommentTree {
    pub fn nodes(&self) -> impl Iterator<Item = &CommentNode> {
        self.per_file.values().flat_map(|roots| walk_forest(roots))
    }

    pub fn find(&self, id: &NodeId) -> Option<&CommentNode> {
        self.nodes().find(|n| &n.id == id)
    }
}

/// Binding from a node to the code it documents. Multi-anchor nodes may link
/// several disjoint segments; they are fingerprinted together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CodeLink {
    pub node_id: NodeId,
    pub code_ranges: Vec<SourceRange>,
    pub code_fingerprint: String,
}
