use metab_core::charspace::{fmt_rational, Character};
use metab_core::valuations::ExtInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::input::SetupFile;

/// Output of one command: human-readable lines and the JSON document.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub setup_digest: Option<String>,
    pub result: Value,
    pub certificates: Value,
    pub anomalies: Vec<String>,
    pub lines: Vec<String>,
    /// Process exit code.
    pub status: u8,
}

impl Report {
    pub fn new(command: &'static str, setup: Option<&SetupFile>) -> Self {
        Report {
            command,
            setup_digest: setup.map(digest),
            result: Value::Null,
            certificates: Value::Array(Vec::new()),
            anomalies: Vec::new(),
            lines: Vec::new(),
            status: 0,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Canonical JSON: keys sorted (serde_json maps are ordered), integers
    /// only as numbers, rationals as strings.
    pub fn to_json(&self) -> String {
        let doc = json!({
            "command": self.command,
            "setup_digest": self.setup_digest,
            "result": self.result,
            "certificates": self.certificates,
            "anomalies": self.anomalies,
        });
        serde_json::to_string_pretty(&doc).expect("values serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = self.lines.join("\n");
        for a in &self.anomalies {
            out.push_str(&format!("\nanomaly: {}", a));
        }
        out
    }
}

/// SHA-256 of the canonical setup JSON.
pub fn digest(setup: &SetupFile) -> String {
    let v = serde_json::to_value(setup.canonical()).expect("setup serializes");
    hex::encode(Sha256::digest(serde_json::to_string(&v).expect("value serializes").as_bytes()))
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(fmt_rational(r))
}

pub fn character(c: &Character) -> Value {
    Value::Array(c.coords().iter().map(rational).collect())
}

pub fn ext_int(x: ExtInt) -> Value {
    match x {
        ExtInt::Finite(v) => json!(v),
        ExtInt::Infinity => json!("inf"),
    }
}
