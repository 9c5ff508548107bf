//! CSV and JSON serialization of command payloads.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::applications::ScanTable;
use crate::error::{Error, Result};
use crate::spectrum::{EnergyLevel, Mode, Root};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => csv_escape(s),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (c, v) in self.columns.iter().zip(row) {
                        obj.insert(c.clone(), v.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// A command result in both renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct Payload {
    pub json: Value,
    pub table: Table,
}

impl Payload {
    /// A single record; the CSV form is the flattened object as one row.
    pub fn record<T: Serialize>(value: &T) -> Result<Self> {
        let json = serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))?;
        let mut cols = Vec::new();
        let mut cells = Vec::new();
        flatten("", &json, &mut cols, &mut cells);
        let mut table = Table::new(cols);
        table.push(cells);
        Ok(Payload { json, table })
    }

    pub fn table(table: Table) -> Self {
        Payload {
            json: table.to_json_value(),
            table,
        }
    }
}

fn join_key(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}_{key}")
    }
}

// Two-number arrays are complex values and become (re, im) column pairs.
fn flatten(prefix: &str, v: &Value, cols: &mut Vec<String>, cells: &mut Vec<Cell>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join_key(prefix, k), x, cols, cells);
            }
        }
        Value::Array(items) if items.len() == 2 && items.iter().all(Value::is_number) => {
            for (suffix, x) in ["re", "im"].iter().zip(items) {
                flatten(&join_key(prefix, suffix), x, cols, cells);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join_key(prefix, &i.to_string()), x, cols, cells);
            }
        }
        Value::Null => {
            cols.push(prefix.to_string());
            cells.push(Cell::Text(String::new()));
        }
        Value::Bool(b) => {
            cols.push(prefix.to_string());
            cells.push(Cell::Bool(*b));
        }
        Value::Number(n) => {
            cols.push(prefix.to_string());
            cells.push(match n.as_i64() {
                Some(i) => Cell::Int(i),
                None => Cell::Float(n.as_f64().unwrap_or(f64::NAN)),
            });
        }
        Value::String(s) => {
            cols.push(prefix.to_string());
            cells.push(Cell::Text(s.clone()));
        }
    }
}

pub fn serialize(payload: &Payload, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => payload.table.to_csv().into_bytes(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&payload.json).expect("serializable value");
            s.push('\n');
            s.into_bytes()
        }
    }
}

/// 12 significant digits, trailing zeros dropped.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.11e}");
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let rounded: f64 = s.parse().expect("float");
        let t = format!("{:.*}", (11 - exp).max(0) as usize, rounded);
        trim_fraction(&t).to_string()
    } else {
        format!("{}e{exp}", trim_fraction(mant))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn branch_name(root: Root) -> &'static str {
    match root {
        Root::Plus => "plus",
        Root::Minus => "minus",
    }
}

/// One row per root; in validated mode only the valid roots are listed.
pub fn levels_table(levels: &[EnergyLevel]) -> Table {
    let mut t = Table::new(["n", "branch", "E_re", "E_im", "valid"]);
    for l in levels {
        for root in [Root::Plus, Root::Minus] {
            let valid = l.is_valid(root);
            if l.mode == Mode::Validated && !valid {
                continue;
            }
            let e = l.root(root);
            t.push(vec![
                Cell::Int(l.n as i64),
                Cell::Text(branch_name(root).into()),
                Cell::Float(e.re),
                Cell::Float(e.im),
                Cell::Bool(valid),
            ]);
        }
    }
    t
}

pub fn scan_payload(scan: &ScanTable) -> Result<Payload> {
    let label = |name: &str, unit: &str| {
        if unit.is_empty() || unit == "1" {
            name.to_string()
        } else {
            format!("{name} [{unit}]")
        }
    };
    let mut t = Table::new([
        label(&scan.sweep_label, &scan.sweep_unit),
        "series".into(),
        "n".into(),
        "branch".into(),
        label(&format!("{}_re", scan.value_label), &scan.value_unit),
        label(&format!("{}_im", scan.value_label), &scan.value_unit),
        "valid".into(),
    ]);
    for r in &scan.rows {
        t.push(vec![
            Cell::Float(r.sweep),
            Cell::Text(r.series.clone()),
            Cell::Int(r.n as i64),
            Cell::Text(r.branch.clone()),
            Cell::Float(r.value),
            Cell::Float(r.imag),
            Cell::Bool(r.valid),
        ]);
    }
    let json = serde_json::to_value(scan).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(Payload { json, table: t })
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let fail = |e: std::io::Error| Error::Output {
        path: path.display().to_string(),
        reason: e.to_string(),
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
