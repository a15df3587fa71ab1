//! Line-delimited result records and the flat summary table.
//!
//! A record stream is the header line [`SCHEMA`] followed by one JSON object
//! per line. Every object carries an `experiment` key; the remaining keys are
//! the record's fields, written in sorted order so identical results give
//! identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use serde_json::{Map, Value};

pub const SCHEMA: &str = "roundlab.records/1";

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub experiment: String,
    pub fields: BTreeMap<String, Value>,
}

impl Record {
    pub fn new(experiment: impl Into<String>) -> Self {
        Record {
            experiment: experiment.into(),
            fields: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn f64(&self, key: &str) -> Option<f64> {
        self.fields.get(key).and_then(Value::as_f64)
    }

    pub fn to_line(&self) -> String {
        let mut object = Map::new();
        object.insert("experiment".into(), Value::String(self.experiment.clone()));
        for (k, v) in &self.fields {
            object.insert(k.clone(), v.clone());
        }
        Value::Object(object).to_string()
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let Value::Object(mut object) = serde_json::from_str(line).context("record is not JSON")?
        else {
            bail!("record is not a JSON object: {line}");
        };
        let Some(Value::String(experiment)) = object.remove("experiment") else {
            bail!("record without an experiment name: {line}");
        };
        Ok(Record {
            experiment,
            fields: object.into_iter().collect(),
        })
    }
}

/// The full record stream, header included.
pub fn render_records(records: &[Record]) -> String {
    let mut out = String::from(SCHEMA);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}

pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == SCHEMA => {}
        Some(h) => bail!("unknown record schema {h:?}, expected {SCHEMA:?}"),
        None => bail!("empty record stream"),
    }
    lines.map(Record::from_line).collect()
}

/// `x` rounded to four significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-3..6).contains(&magnitude) {
        return format!("{x:.3e}");
    }
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => "-".into(),
        Some(Value::Number(n)) => match n.as_i64() {
            Some(i) if i.unsigned_abs() < 1_000_000 => i.to_string(),
            _ => format_number(n.as_f64().unwrap_or(f64::NAN)),
        },
        Some(Value::Bool(b)) => b.to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

/// One row per record, one column per field name seen in any record.
pub fn render_table(records: &[Record]) -> String {
    let keys: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| r.fields.keys().map(String::as_str))
        .collect();
    let mut header = vec!["experiment".to_string()];
    header.extend(keys.iter().map(|k| k.to_string()));
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let mut row = vec![r.experiment.clone()];
            row.extend(keys.iter().map(|k| cell(r.get(k))));
            row
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}
