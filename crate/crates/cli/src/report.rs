//! Tabular reports with CSV and JSON encodings of the same cells.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{Map, Value};

/// One cell. Exact values keep full precision as decimal strings.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigUint),
    Ratio(BigRational),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Ratio(q) => ratio_string(q),
            Cell::Float(x) => float_string(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => quote(s),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => Value::String(n.to_string()),
            Cell::Ratio(q) => Value::String(ratio_string(q)),
            Cell::Float(x) if x.is_finite() => Value::from(*x),
            Cell::Float(x) => Value::String(float_string(*x)),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// `p/q` in lowest terms; integers without the denominator.
pub fn ratio_string(q: &BigRational) -> String {
    if q.is_integer() { q.numer().to_string() } else { format!("{}/{}", q.numer(), q.denom()) }
}

/// Shortest round-trip decimal, the same digits JSON numbers use.
fn float_string(x: f64) -> String {
    if x.is_finite() { serde_json::Number::from_f64(x).expect("finite").to_string() } else { x.to_string() }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.to_string() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report { command: command.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(self.command.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("reports always serialize");
        text.push('\n');
        text
    }
}
