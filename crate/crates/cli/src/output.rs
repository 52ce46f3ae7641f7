use std::time::Duration;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::OutputFormat;

pub const SCHEMA_VERSION: &str = "1.0";

/// Rows for CSV output; the header is fixed per command.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// What a command produced, before formatting.
#[derive(Debug, Default)]
pub struct Outcome {
    pub payload: Value,
    pub table: Option<Table>,
    pub notes: Vec<String>,
    /// Set by `verify` when an invariant failed.
    pub failed: bool,
}

impl Outcome {
    pub fn new(payload: impl Serialize) -> Self {
        Outcome {
            payload: serde_json::to_value(payload).expect("payload serializes"),
            ..Outcome::default()
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[derive(Serialize)]
struct Timing {
    wall_seconds: f64,
}

#[derive(Serialize)]
struct Report<'a> {
    schema_version: &'static str,
    request: &'a Value,
    payload: &'a Value,
    timing: Timing,
    budget_notes: &'a [String],
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            items.iter().map(scalar).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

/// Dotted `key: value` pairs for every leaf of an object (arrays of
/// scalars stay on one line).
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => flatten_map(prefix, map, out),
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), item, out);
            }
        }
        leaf => out.push((prefix.to_string(), scalar(leaf))),
    }
}

fn flatten_map(prefix: &str, map: &Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (k, v) in map {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        flatten(&key, v, out);
    }
}

pub fn render(format: OutputFormat, request: &Value, outcome: &Outcome, elapsed: Duration) -> String {
    match format {
        OutputFormat::Json => {
            let report = Report {
                schema_version: SCHEMA_VERSION,
                request,
                payload: &outcome.payload,
                timing: Timing {
                    wall_seconds: elapsed.as_secs_f64(),
                },
                budget_notes: &outcome.notes,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            match &outcome.table {
                Some(t) => {
                    w.write_record(&t.headers).unwrap();
                    for r in &t.rows {
                        w.write_record(r).unwrap();
                    }
                }
                None => {
                    let mut pairs = Vec::new();
                    flatten("", &outcome.payload, &mut pairs);
                    w.write_record(pairs.iter().map(|p| &p.0)).unwrap();
                    w.write_record(pairs.iter().map(|p| &p.1)).unwrap();
                }
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        OutputFormat::Plain => {
            let mut pairs = Vec::new();
            match &outcome.table {
                // tabular payloads print as aligned columns instead
                Some(_) => {
                    if let Value::Object(map) = &outcome.payload {
                        for (k, v) in map {
                            if !v.is_array() {
                                flatten(k, v, &mut pairs);
                            }
                        }
                    }
                }
                None => flatten("", &outcome.payload, &mut pairs),
            }
            let mut s = String::new();
            for (k, v) in &pairs {
                s.push_str(&format!("{k}: {v}\n"));
            }
            if let Some(t) = &outcome.table {
                if !s.is_empty() {
                    s.push('\n');
                }
                s.push_str(&aligned(t));
            }
            for n in &outcome.notes {
                s.push_str(&format!("note: {n}\n"));
            }
            s
        }
    }
}

fn aligned(t: &Table) -> String {
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.len()).collect();
    for r in &t.rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}", w = *w))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(t.headers.clone());
    for r in &t.rows {
        s.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    s
}
