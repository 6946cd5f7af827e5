//! Report envelope shared by every pipeline, and the exit-code taxonomy.
//!
//! Reports are deterministic: field order is fixed by struct declaration,
//! collections are vectors or sorted maps, and no timestamps are embedded,
//! so identical (argv, seed) pairs produce byte-identical JSON.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Mismatch,
    Info,
}

/// Exit taxonomy: 0 verified/success, 1 operational error, 2 a conjecture
/// check ran to completion and found a mismatch, 64 usage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success,
    Operational,
    ConjectureMismatch,
    Usage,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        match self {
            ExitCode::Success => 0,
            ExitCode::Operational => 1,
            ExitCode::ConjectureMismatch => 2,
            ExitCode::Usage => 64,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub status: Status,
    pub payload: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, status: Status, payload: serde_json::Value) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            group: None,
            k: None,
            seed: None,
            status,
            payload,
        }
    }

    pub fn with_group(mut self, g: &str) -> Report {
        self.group = Some(g.to_string());
        self
    }

    pub fn with_k(mut self, k: usize) -> Report {
        self.k = Some(k);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Flat human-readable rendering.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if let Some(g) = &self.group {
            out.push_str(&format!("group: {g}\n"));
        }
        if let Some(k) = self.k {
            out.push_str(&format!("k: {k}\n"));
        }
        if let Some(s) = self.seed {
            out.push_str(&format!("seed: {s}\n"));
        }
        out.push_str(&format!("status: {:?}\n", self.status));
        render_value("", &self.payload, &mut out, 0);
        out
    }
}

fn render_value(key: &str, v: &serde_json::Value, out: &mut String, depth: usize) {
    if depth > 4 {
        out.push_str(&format!("{key}: ...\n"));
        return;
    }
    let indent = "  ".repeat(depth);
    match v {
        serde_json::Value::Object(map) => {
            if !key.is_empty() {
                out.push_str(&format!("{indent}{key}:\n"));
            }
            for (k, val) in map {
                render_value(k, val, out, depth + 1);
            }
        }
        serde_json::Value::Array(items) => {
            if items.len() > 40 {
                out.push_str(&format!("{indent}{key}: [{} items]\n", items.len()));
            } else if items.iter().all(|x| !x.is_object() && !x.is_array()) {
                let row: Vec<String> = items.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("{indent}{key}: [{}]\n", row.join(", ")));
            } else {
                out.push_str(&format!("{indent}{key}:\n"));
                for (i, item) in items.iter().enumerate() {
                    render_value(&format!("[{i}]"), item, out, depth + 1);
                }
            }
        }
        other => {
            out.push_str(&format!("{indent}{key}: {other}\n"));
        }
    }
}
