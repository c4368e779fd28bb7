//! Tabular emission: CSV with a fixed header, or a JSON document carrying a
//! version stamp and an echo of the resolved inputs. All computed floats go
//! through the 12-significant-digit formatter; input echoes print as typed.

use qshannon::fmt;
use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub enum Cell {
    /// Input echo or label — printed verbatim.
    Str(String),
    /// Computed float — 12 significant digits.
    F(f64),
    U(u64),
    Empty,
}

impl Cell {
    pub fn echo(x: f64) -> Cell {
        Cell::Str(format!("{x}"))
    }

    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::F(x) => fmt::sig12(*x),
            Cell::U(n) => n.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Str(s) => s
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(s.clone())),
            Cell::F(x) => json_num(*x),
            Cell::U(n) => Value::Number((*n).into()),
            Cell::Empty => Value::Null,
        }
    }
}

/// A float as a JSON number rounded to 12 significant digits.
pub fn json_num(x: f64) -> Value {
    let rounded: f64 = fmt::sig12(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (name, cell) in self.columns.iter().zip(row) {
                        obj.insert((*name).to_string(), cell.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// The single top-level JSON object every `--format json` run emits.
pub fn json_document(inputs: Value, body: &[(&str, Value)]) -> String {
    let mut doc = json!({
        "version": VERSION,
        "inputs": inputs,
    });
    let obj = doc.as_object_mut().expect("document is an object");
    for (k, v) in body {
        obj.insert((*k).to_string(), v.clone());
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
