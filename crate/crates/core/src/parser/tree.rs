use std::collections::HashMap;

use crate::hash::{collapse_whitespace, sha256_hex, text_hash};
use crate::model::{
    Anchor, AnchorStatus, CommentNode, CommentRecord, Diagnostic, Label, LineIndex, NodeId,
};

/// Result of [`build_tree`].
#[derive(Debug, Clone, Default)]
pub struct TreeBuild {
    pub roots: Vec<CommentNode>,
    pub unlabeled: Vec<CommentRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Stable id of the node for `label` in `scope` of `file`. Overloaded
/// declarations are told apart by the `#n` ordinal in their scope name.
pub fn node_id(file: &str, scope: &str, label: &Label) -> NodeId {
    let path: Vec<String> = label.path.iter().map(u32::to_string).collect();
    let key = format!("{file}\0{scope}\0{}\0{}", label.prefix, path.join("."));
    NodeId(sha256_hex(key)[..16].to_string())
}

/// Anchor for a comment record: hashes of its normalized text and of the
/// nearest non-blank lines around it.
pub fn anchor_for(record: &CommentRecord, source: &str, index: &LineIndex) -> Anchor {
    let before = (1..record.range.start_line)
        .rev()
        .map(|l| &source[index.line_start(l)..index.line_end(l)])
        .find(|l| !l.trim().is_empty())
        .unwrap_or("");
    let after = (record.range.end_line + 1..=index.line_count())
        .map(|l| &source[index.line_start(l)..index.line_end(l)])
        .find(|l| !l.trim().is_empty())
        .unwrap_or("");
    Anchor {
        file: record.file.clone(),
        range: record.range,
        text_hash: text_hash(&record.body),
        context_hash: sha256_hex(format!(
            "{}\n{}",
            collapse_whitespace(before),
            collapse_whitespace(after)
        )),
        status: AnchorStatus::Valid,
    }
}

/// Builds the per-file forest from labeled, scoped records in source order.
///
/// Records with the same label in the same scope merge into one node with
/// several anchors. A node is parented to the nearest preceding node of the
/// same scope and prefix whose path is a proper prefix of its own; a dotted
/// label with no such node becomes a root and is reported.
pub fn build_tree(file: &str, records: &mut [CommentRecord], source: &str) -> TreeBuild {
    let index = LineIndex::new(source);
    let mut out = TreeBuild::default();

    struct Flat {
        node: CommentNode,
        parent: Option<usize>,
    }
    let mut flat: Vec<Flat> = Vec::new();
    let mut by_key: HashMap<(String, Label), usize> = HashMap::new();

    for rec in records.iter_mut() {
        let Some(label) = rec.label.clone() else {
            out.unlabeled.push(rec.clone());
            continue;
        };
        let key = (rec.scope.clone(), label.clone());
        let anchor = anchor_for(rec, source, &index);
        if let Some(&i) = by_key.get(&key) {
            rec.node_id = Some(flat[i].node.id.clone());
            flat[i].node.anchors.push(anchor);
            continue;
        }
        let id = node_id(file, &rec.scope, &label);
        rec.node_id = Some(id.clone());

        let parent = flat
            .iter()
            .enumerate()
            .filter(|(_, f)| f.node.scope == rec.scope && f.node.label.is_ancestor_of(&label))
            .max_by_key(|(_, f)| {
                let nearest = f
                    .node
                    .anchors
                    .iter()
                    .map(|a| a.range.start)
                    .filter(|&s| s < rec.range.start)
                    .max();
                (nearest, f.node.label.depth())
            })
            .map(|(i, _)| i);
        if parent.is_none() && label.depth() > 1 {
            out.diagnostics.push(Diagnostic::grammar(
                file,
                Some(rec.range),
                format!("{} has no enclosing {} node", label.raw, parent_name(&label)),
            ));
        }
        by_key.insert(key, flat.len());
        flat.push(Flat {
            node: CommentNode {
                id,
                label,
                scope: rec.scope.clone(),
                anchors: vec![anchor],
                clauses: rec.clauses.clone(),
                children: Vec::new(),
                parent_id: parent.map(|p| flat[p].node.id.clone()),
            },
            parent,
        });
    }

    // Attach children bottom-up so each subtree is complete before it moves.
    let mut slots: Vec<Option<CommentNode>> = Vec::with_capacity(flat.len());
    let parents: Vec<Option<usize>> = flat.iter().map(|f| f.parent).collect();
    slots.extend(flat.into_iter().map(|f| Some(f.node)));
    for i in (0..slots.len()).rev() {
        if let Some(p) = parents[i] {
            let child = slots[i].take().expect("child visited once");
            slots[p].as_mut().expect("parents precede children").children.push(child);
        }
    }
    let mut roots: Vec<CommentNode> = slots.into_iter().flatten().collect();
    for root in &mut roots {
        sort_children(root);
    }
    roots.sort_by_key(|n| n.first_anchor().range.start);
    out.roots = roots;
    out
}

fn sort_children(node: &mut CommentNode) {
    node.children.sort_by(|a, b| a.label.cmp(&b.label));
    for c in &mut node.children {
        sort_children(c);
    }
}

fn parent_name(label: &Label) -> String {
    let parent = &label.path[..label.path.len() - 1];
    Label::new(&label.prefix, parent.to_vec()).map_or_else(String::new, |l| l.raw)
}
