//! Relocating comment anchors after a file changed.

use crate::config::Config;
use crate::hash::text_hash;
use crate::model::{Anchor, AnchorStatus, CommentRecord, SourceRange};
use crate::parser::{coalesce, extract_comments};

/// A comment occurrence in the new source that an anchor may move to.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub range: SourceRange,
    pub text_hash: String,
}

impl From<&CommentRecord> for Candidate {
    fn from(r: &CommentRecord) -> Self {
        Self {
            range: r.range,
            text_hash: text_hash(&r.body),
        }
    }
}

/// Comment occurrences of `source`, coalesced the same way the parser does.
pub fn candidates(file: &str, source: &str, config: &Config) -> Vec<Candidate> {
    let raw = extract_comments(file, source, &config.syntax).records;
    coalesce(raw, source, &config.patterns).iter().map(Candidate::from).collect()
}

/// Re-anchors one anchor against `new_source`.
pub fn reanchor(old: &Anchor, new_source: &str, config: &Config) -> Anchor {
    let cands = candidates(&old.file, new_source, config);
    reanchor_all(&[old], &cands).remove(0)
}

/// Re-anchors all anchors of one file together so that no two anchors claim
/// the same occurrence. Anchors whose text is still at the old range stay
/// valid; the rest take the nearest unclaimed occurrence with the same text
/// hash by line distance, preferring the earlier one on ties, in the order
/// given; otherwise they are orphaned with the old range kept.
pub fn reanchor_all(old: &[&Anchor], cands: &[Candidate]) -> Vec<Anchor> {
    let mut claimed = vec![false; cands.len()];
    let mut out: Vec<Option<Anchor>> = vec![None; old.len()];

    for (i, a) in old.iter().enumerate() {
        if let Some(j) = cands
            .iter()
            .position(|c| c.range == a.range && c.text_hash == a.text_hash)
        {
            if !claimed[j] {
                claimed[j] = true;
                out[i] = Some(with_status(a, a.range, AnchorStatus::Valid));
            }
        }
    }

    for (i, a) in old.iter().enumerate() {
        if out[i].is_some() {
            continue;
        }
        let best = cands
            .iter()
            .enumerate()
            .filter(|(j, c)| !claimed[*j] && c.text_hash == a.text_hash)
            .min_by_key(|(_, c)| (c.range.start_line.abs_diff(a.range.start_line), c.range.start));
        out[i] = Some(match best {
            Some((j, c)) => {
                claimed[j] = true;
                with_status(a, c.range, AnchorStatus::Relocated)
            }
            None => with_status(a, a.range, AnchorStatus::Orphaned),
        });
    }
    out.into_iter().flatten().collect()
}

fn with_status(a: &Anchor, range: SourceRange, status: AnchorStatus) -> Anchor {
    Anchor {
        range,
        status,
        ..a.clone()
    }
}
