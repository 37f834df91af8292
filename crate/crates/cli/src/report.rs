use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::instance::{Instance, Kind, SCHEMA};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// The lowest failing trial and what went wrong.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
    pub details: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
    pub timing_ms: f64,
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of the canonical (key-sorted, compact) JSON form.
pub fn canonical_digest<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("serializable");
    sha256_hex(serde_json::to_string(&value).expect("serializable").as_bytes())
}

pub fn instance_digest(inst: &Instance) -> String {
    canonical_digest(inst)
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            kind: None,
            instance_digest: None,
            decision: None,
            matches_expected: None,
            details: Value::Null,
            properties: Vec::new(),
            passed: true,
            timing_ms: 0.0,
            digest: String::new(),
        }
    }

    /// Seals the report: the digest covers everything except timing.
    pub fn seal(mut self, timing_ms: f64) -> Self {
        self.timing_ms = 0.0;
        self.digest = String::new();
        let mut value = serde_json::to_value(&self).expect("serializable");
        if let Value::Object(map) = &mut value {
            map.remove("timing_ms");
            map.remove("digest");
        }
        self.digest = sha256_hex(serde_json::to_string(&value).expect("serializable").as_bytes());
        self.timing_ms = timing_ms;
        self
    }
}
