//! Canonical JSON encoding and content digests.
//!
//! Everything persisted by the engine (grammar files, DSL documents, run
//! manifests, log records) goes through one canonical form: object keys
//! sorted lexicographically, compact separators, shortest round-trip
//! number formatting, UTF-8, LF line endings. Canonical bytes are what
//! digests are computed over, so two semantically equal values always
//! hash identically.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Serializes a value to canonical JSON (sorted keys, compact form).
///
/// `serde_json` maps are backed by `BTreeMap` here (the `preserve_order`
/// feature is deliberately not enabled), so key order is always sorted.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("canonical serialization cannot fail for engine types")
}

/// Canonical JSON followed by a single LF, for writing whole files.
pub fn to_canonical_file<T: Serialize>(value: &T) -> String {
    let mut s = to_canonical_json(value);
    s.push('\n');
    s
}

/// 256-bit SHA-256 digest of arbitrary bytes, lowercase hex.
pub fn digest256_hex(bytes: &[u8]) -> String {
    let out = Sha256::digest(bytes);
    hex_lower(&out)
}

/// 64-bit digest (first 8 bytes of SHA-256), lowercase hex — the
/// per-record checksum used by the append-only log.
pub fn digest64_hex(bytes: &[u8]) -> String {
    let out = Sha256::digest(bytes);
    hex_lower(&out[..8])
}

/// Derives a child seed from a master seed and a path of string tags.
///
/// Stable across platforms and runs: the derivation hashes the decimal
/// master seed and the tag path, then takes the first 8 digest bytes
/// little-endian.
pub fn derive_seed(master: u64, tags: &[&str]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_string().as_bytes());
    for tag in tags {
        hasher.update(b"/");
        hasher.update(tag.as_bytes());
    }
    let out = hasher.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("sha256 output is 32 bytes"))
}

fn hex_lower(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn canonical_json_sorts_keys() {
        let mut m = BTreeMap::new();
        m.insert("zeta".to_string(), 1);
        m.insert("alpha".to_string(), 2);
        assert_eq!(to_canonical_json(&m), r#"{"alpha":2,"zeta":1}"#);
    }

    #[test]
    fn canonical_json_is_stable_for_floats() {
        // shortest round-trip formatting: 0.1 stays "0.1", not "0.1000...".
        let v = serde_json::json!({"x": 0.1, "y": 5.65});
        assert_eq!(to_canonical_json(&v), r#"{"x":0.1,"y":5.65}"#);
    }

    #[test]
    fn derive_seed_is_stable_and_tag_sensitive() {
        let s1 = derive_seed(42, &["turn", "1", "2"]);
        let s2 = derive_seed(42, &["turn", "1", "2"]);
        let s3 = derive_seed(42, &["turn", "1", "3"]);
        assert_eq!(s1, s2);
        assert_ne!(s1, s3);
    }

    #[test]
    fn digest_lengths() {
        assert_eq!(digest64_hex(b"x").len(), 16);
        assert_eq!(digest256_hex(b"x").len(), 64);
    }
}
