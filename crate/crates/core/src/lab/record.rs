//! Result records: one JSON line per computed item.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;
/// Minimiser tie-break rule: smallest max-norm, then lexicographic after
/// sign normalisation; interval ties separated by opposite precision.
pub const TIE_BREAK: &str = "maxnorm-lex/v1";

/// Report ordering key `(D, subset, l)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SortKey {
    pub d: Option<u64>,
    pub subset: Vec<i64>,
    pub l: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub experiment_id: String,
    pub config_hash: String,
    pub inputs_digest: String,
    pub op: String,
    pub seed: u64,
    pub precision: u32,
    pub approximate: bool,
    pub tie_break: String,
    pub key: SortKey,
    pub payload: serde_json::Value,
}

pub fn experiment_id(config_hash: &str, inputs_digest: &str) -> String {
    let mut h = Sha256::new();
    h.update(config_hash.as_bytes());
    h.update(b":");
    h.update(inputs_digest.as_bytes());
    hex::encode(&h.finalize()[..8])
}

impl ResultRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serialises")
    }
}
