//! Tabular results and their CSV / JSON encodings.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, `.` separator, independent of locale.
pub fn format_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => csv_escape(s),
        }
    }

    fn json(&self) -> Value {
        match self {
            // serde_json maps non-finite floats to null
            Cell::Num(v) => Value::from(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

/// Outcome of a command, echoed into the metadata and mapped to the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub table: Table,
}

fn metadata(report: &Report, config: &RunConfig) -> Vec<(String, Value)> {
    let mut meta = vec![
        ("tool".to_string(), Value::from(env!("CARGO_PKG_NAME"))),
        (
            "version".to_string(),
            Value::from(env!("CARGO_PKG_VERSION")),
        ),
        ("command".to_string(), Value::from(report.command)),
        ("status".to_string(), Value::from(report.status.as_str())),
    ];
    if !config.reproducible {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        meta.push(("generated_unix".to_string(), Value::from(secs)));
    }
    let cfg: Map<String, Value> = config
        .entries()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::from(v)))
        .collect();
    meta.push(("config".to_string(), Value::Object(cfg)));
    meta
}

pub fn render(report: &Report, config: &RunConfig) -> String {
    match config.format {
        Format::Csv => render_csv(report, config),
        Format::Json => render_json(report, config),
    }
}

fn render_csv(report: &Report, config: &RunConfig) -> String {
    let mut out = String::new();
    for (key, value) in metadata(report, config) {
        match value {
            Value::Object(map) => {
                for (k, v) in map {
                    let _ = writeln!(out, "# {key}.{k} = {}", v.as_str().unwrap_or_default());
                }
            }
            Value::String(s) => {
                let _ = writeln!(out, "# {key} = {s}");
            }
            other => {
                let _ = writeln!(out, "# {key} = {other}");
            }
        }
    }
    out.push_str(&report.table.columns.join(","));
    out.push('\n');
    for row in &report.table.rows {
        let line: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn render_json(report: &Report, config: &RunConfig) -> String {
    let meta: Map<String, Value> = metadata(report, config).into_iter().collect();
    let data: Vec<Value> = report
        .table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = report
                .table
                .columns
                .iter()
                .zip(row)
                .map(|(c, cell)| (c.to_string(), cell.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut root = Map::new();
    root.insert("meta".into(), Value::Object(meta));
    root.insert("data".into(), Value::Array(data));
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialize");
    s.push('\n');
    s
}
