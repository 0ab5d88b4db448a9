//! Versioned run manifest.
//!
//! The manifest is a deterministic function of (input bytes, config bytes):
//! config snapshot, per-stage row bookkeeping and per-model reports. Wall
//! clock goes to a separate timings sidecar so reruns stay byte-identical.

use std::collections::BTreeMap;

use credit_core::metrics::MetricsReport;
use serde::{Deserialize, Serialize};

pub const MANIFEST_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub rows_before: usize,
    pub rows_after: usize,
    pub detail: BTreeMap<String, String>,
}

impl StageRecord {
    pub fn new(name: &str, rows_before: usize, rows_after: usize) -> Self {
        StageRecord {
            name: name.to_string(),
            rows_before,
            rows_after,
            detail: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.detail.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassRecord {
    pub name: String,
    pub stages: Vec<StageRecord>,
    pub reports: Vec<MetricsReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub config: BTreeMap<String, String>,
    pub passes: Vec<PassRecord>,
}

impl RunManifest {
    pub fn new(config: BTreeMap<String, String>) -> Self {
        RunManifest {
            format_version: MANIFEST_FORMAT_VERSION,
            config,
            passes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// `stage=seconds` lines; the non-deterministic side channel.
pub fn timings_to_text(timings: &[(String, f64)]) -> String {
    let mut out = String::new();
    for (stage, secs) in timings {
        out.push_str(&format!("{stage}={secs:.6}\n"));
    }
    out
}
