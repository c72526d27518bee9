//! Staleness detection between a stored baseline and a fresh scan.

use crate::error::{Error, Result};
use crate::linker::broken_link;
use crate::model::{
    sort_diagnostics, Acknowledgement, AnchorStatus, CodeLink, CommentNode, Diagnostic,
    DiagnosticKind, FileEntry, NodeId, Severity, Snapshot,
};

use super::reanchor::{reanchor_all, Candidate};

/// Fingerprint used for a node without a linked region.
const NO_REGION: &str = "";

/// Compares `current` against the baseline `old`.
///
/// For every node of `old`: a vanished file gives `BrokenLink`; an anchor
/// whose text can no longer be found gives `OrphanedComment`; otherwise a
/// changed code fingerprint that is not acknowledged gives `StaleComment`.
/// Nodes that only exist in `current` are not reported.
pub fn diff(old: &Snapshot, current: &Snapshot) -> Result<Vec<Diagnostic>> {
    if old.project_root != current.project_root {
        return Err(Error::ProjectRootMismatch {
            expected: old.project_root.clone(),
            actual: current.project_root.clone(),
        });
    }
    let mut out = Vec::new();
    for (file, old_entry) in &old.files {
        match current.files.get(file) {
            None => out.extend(old_entry.all_nodes().map(|n| broken_link(file, n))),
            Some(cur_entry) => diff_file(file, old, old_entry, cur_entry, &mut out),
        }
    }
    sort_diagnostics(&mut out);
    Ok(out)
}

fn diff_file(file: &str, old: &Snapshot, old_entry: &FileEntry, cur: &FileEntry, out: &mut Vec<Diagnostic>) {
    let nodes: Vec<&CommentNode> = old_entry.all_nodes().collect();
    let anchors: Vec<_> = nodes.iter().flat_map(|n| n.anchors.iter()).collect();
    let cands: Vec<Candidate> = cur.records.iter().map(Candidate::from).collect();
    let mut moved = reanchor_all(&anchors, &cands).into_iter();

    for node in nodes {
        let new_anchors: Vec<_> = moved.by_ref().take(node.anchors.len()).collect();
        if let Some(orphan) = new_anchors.iter().find(|a| a.status == AnchorStatus::Orphaned) {
            out.push(Diagnostic {
                kind: DiagnosticKind::OrphanedComment,
                node_id: Some(node.id.clone()),
                node: Some(node.display_name()),
                file: file.to_string(),
                comment_range: Some(orphan.range),
                code_ranges: old_entry.link(&node.id).map(|l| l.code_ranges.clone()).unwrap_or_default(),
                message: format!(
                    "the text of {} changed or was removed; rescan to adopt the new comment",
                    node.display_name()
                ),
                severity: Severity::Warning,
            });
            continue;
        }
        let old_link = old_entry.link(&node.id);
        let new_link = cur.link(&node.id);
        let old_fp = old_link.map_or(NO_REGION, |l| l.code_fingerprint.as_str());
        let new_fp = new_link.map_or(NO_REGION, |l| l.code_fingerprint.as_str());
        if old_fp == new_fp || old.is_acknowledged(&node.id, new_fp) {
            continue;
        }
        let code_ranges = new_link.or(old_link).map(|l| l.code_ranges.clone()).unwrap_or_default();
        out.push(Diagnostic {
            kind: DiagnosticKind::StaleComment,
            node_id: Some(node.id.clone()),
            node: Some(node.display_name()),
            file: file.to_string(),
            comment_range: new_anchors.first().map(|a| a.range),
            code_ranges,
            message: stale_message(node, old_link, new_link),
            severity: Severity::Warning,
        });
    }
}

fn stale_message(node: &CommentNode, old: Option<&CodeLink>, new: Option<&CodeLink>) -> String {
    let name = node.display_name();
    match (old, new) {
        (Some(_), None) => format!("{name} no longer documents any code; review or remove it"),
        (None, Some(_)) => format!("{name} now precedes code it did not document before; review it"),
        _ => format!("code documented by {name} changed; review the comment"),
    }
}

/// Acknowledges the current stale finding on `id`: records the current
/// fingerprint and moves the node's baseline link to the current code, so
/// the finding disappears until the code changes again.
pub fn acknowledge(id: &NodeId, baseline: &mut Snapshot, current: &Snapshot) -> Result<()> {
    let Some((file, _)) = baseline.find_node(id) else {
        return Err(Error::UnknownNode(id.to_string()));
    };
    let file = file.to_string();
    let stale = diff(baseline, current)?
        .iter()
        .any(|d| d.kind == DiagnosticKind::StaleComment && d.node_id.as_ref() == Some(id));
    if !stale {
        return Err(Error::NothingToAcknowledge(id.to_string()));
    }
    let new_link = current.files.get(&file).and_then(|e| e.link(id)).cloned();
    baseline.acknowledged.insert(Acknowledgement {
        node_id: id.clone(),
        code_fingerprint: new_link
            .as_ref()
            .map_or_else(|| NO_REGION.to_string(), |l| l.code_fingerprint.clone()),
    });
    let entry = baseline.files.get_mut(&file).expect("node was found in this file");
    entry.links.retain(|l| &l.node_id != id);
    entry.links.extend(new_link);
    Ok(())
}
