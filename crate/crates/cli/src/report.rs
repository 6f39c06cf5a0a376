//! The machine-readable analysis report printed with `--format json`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "stablenet.report/1";

#[derive(Clone, Debug, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub kind: &'static str,
    pub sha256: String,
    pub bytes: usize,
}

impl InputRecord {
    pub fn new(path: &str, kind: &'static str, text: &str) -> Self {
        InputRecord {
            path: path.to_string(),
            kind,
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
            bytes: text.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictRecord {
    pub property: String,
    /// `decider`, `oracle`, or `both`.
    pub method: String,
    pub holds: bool,
    pub witness: Option<Value>,
    pub counterexample: Option<Value>,
    /// Only with `--both`.
    pub oracle_holds: Option<bool>,
    pub notes: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub key: String,
    pub value: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    /// `enewick` or `mulnewick`.
    pub format: &'static str,
    pub text: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub analysis_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Vec<InputRecord>,
    pub options: BTreeMap<String, Value>,
    pub verdicts: Vec<VerdictRecord>,
    pub result: Option<ResultRecord>,
    pub items: Vec<Item>,
    pub timings: Timings,
}
