//! Replayable records of experiment runs.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub command: String,
    pub params: Value,
    pub seed: Option<u64>,
    /// Input name to SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub version: String,
    pub outcome: Value,
    /// Seconds since the Unix epoch; excluded from [`Self::fingerprint`].
    pub timestamp: u64,
}

impl ExperimentManifest {
    pub fn new(command: impl Into<String>, params: Value, seed: Option<u64>) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        ExperimentManifest {
            command: command.into(),
            params,
            seed,
            inputs: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outcome: Value::Null,
            timestamp,
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.inputs.insert(name.into(), sha256_hex(bytes));
    }

    pub fn with_outcome(mut self, outcome: Value) -> Self {
        self.outcome = outcome;
        self
    }

    /// Digest of everything but the timestamp. Re-running the same
    /// command with the same inputs and version reproduces it.
    pub fn fingerprint(&self) -> String {
        let mut v = serde_json::to_value(self).expect("manifest serializes");
        if let Value::Object(m) = &mut v {
            m.remove("timestamp");
        }
        // serde_json maps are ordered, so this text is canonical.
        sha256_hex(v.to_string().as_bytes())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}
