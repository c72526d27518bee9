//! Classifying free-text backend responses.

use crate::model::{Outcome, Verdict};

const SENTENCES: usize = 3;
const AFFIRMATIONS: &[&str] = &["matches", "correctly implements"];
const NEGATIONS: &[&str] = &[
    "does not match",
    "doesn't match",
    "do not match",
    "mistake in the implementation",
    "not correctly implement",
];

/// Classifies a response by the markers in its first three sentences.
///
/// An affirmation ("matches", "correctly implements", a leading "yes")
/// counts only if no negation marker occurs before it. A negation is a
/// leading "no" or one of [`NEGATIONS`]. Exactly one kind present gives a
/// definite outcome; both or neither give [`Outcome::Unknown`].
pub fn parse_verdict(response: &str, backend_id: &str) -> Verdict {
    let head = first_sentences(response, SENTENCES).to_lowercase();
    let head = head.trim_start();

    let mut first_negation = NEGATIONS.iter().filter_map(|m| head.find(m)).min();
    if leading_word(head, "no") {
        first_negation = Some(0);
    }
    let affirmed = leading_word(head, "yes")
        || AFFIRMATIONS
            .iter()
            .flat_map(|m| head.match_indices(m).map(|(i, _)| i))
            .any(|i| first_negation.is_none_or(|n| i < n));

    let outcome = match (affirmed, first_negation.is_some()) {
        (true, false) => Outcome::Consistent,
        (false, true) => Outcome::Inconsistent,
        _ => Outcome::Unknown,
    };
    Verdict {
        outcome,
        explanation: response.to_string(),
        backend_id: backend_id.to_string(),
    }
}

fn leading_word(text: &str, word: &str) -> bool {
    text.strip_prefix(word)
        .is_some_and(|rest| !rest.starts_with(|c: char| c.is_alphanumeric()))
}

/// Prefix of `text` up to the end of its `n`-th sentence. Sentences end at
/// `.`, `!` or `?` followed by whitespace, or at a blank line.
fn first_sentences(text: &str, n: usize) -> &str {
    let bytes = text.as_bytes();
    let mut count = 0;
    let mut i = 0;
    while i < bytes.len() {
        let end = match bytes[i] {
            b'.' | b'!' | b'?' => bytes.get(i + 1).is_none_or(|b| b.is_ascii_whitespace()),
            b'\n' => text[i + 1..].trim_start_matches([' ', '\t', '\r']).starts_with('\n'),
            _ => false,
        };
        if end && !text[..i].trim().is_empty() {
            count += 1;
            if count == n {
                return &text[..=i];
            }
            // Skip the rest of a blank-line run.
            while i + 1 < bytes.len() && bytes[i + 1].is_ascii_whitespace() {
                i += 1;
            }
        }
        i += 1;
    }
    text
}
