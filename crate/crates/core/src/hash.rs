use sha2::{Digest, Sha256};

pub fn sha256_hex(data: impl AsRef<[u8]>) -> String {
    hex::encode(Sha256::digest(data.as_ref()))
}

/// Collapses whitespace runs to one space and trims the ends.
pub fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Fingerprint of a comment body, insensitive to re-indentation.
pub fn text_hash(body: &str) -> String {
    sha256_hex(collapse_whitespace(body))
}
