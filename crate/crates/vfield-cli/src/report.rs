//! Report assembly and rendering.

use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Exit codes.
pub mod code {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const DEGENERATE: i32 = 3;
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    /// Text rendering, one `key: value` line each.
    pub lines: Vec<(String, String)>,
    pub result: Map<String, Value>,
    pub notes: Vec<String>,
    pub code: i32,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            lines: Vec::new(),
            result: Map::new(),
            notes: Vec::new(),
            code: code::OK,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.result.insert(key.to_string(), v);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = format!("command: {}\n", self.command);
                for (k, v) in &self.inputs {
                    out.push_str(&format!("input {k}: {v}\n"));
                }
                for (k, v) in &self.lines {
                    out.push_str(&format!("{k}: {v}\n"));
                }
                for n in &self.notes {
                    out.push_str(&format!("note: {n}\n"));
                }
                out
            }
            Format::Json => {
                let inputs: Map<String, Value> =
                    self.inputs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
                let v = json!({
                    "schema": SCHEMA,
                    "command": self.command,
                    "inputs": inputs,
                    "result": self.result,
                    "notes": self.notes,
                    "exit_code": self.code,
                });
                let mut s = serde_json::to_string_pretty(&v).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

/// `[a, b; c, d]`-style rendering of a square matrix.
pub fn matrix<T: std::fmt::Display>(m: &[Vec<T>]) -> String {
    let rows: Vec<String> =
        m.iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")).collect();
    format!("[{}]", rows.join("; "))
}

/// Matrix as nested arrays of canonical strings.
pub fn matrix_json<T: std::fmt::Display>(m: &[Vec<T>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
}
