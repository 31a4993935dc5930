//! CSV and JSON rendering of result tables.
//!
//! CSV: header row, comma separated, floats in scientific notation with 17
//! significant digits, booleans as 0/1, missing values empty. JSON: one object
//! with `"spec"` and `"rows"` (plus any companion tables).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => if *b { "1" } else { "0" }.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x + 0.0)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// Scientific notation with 17 significant digits.
/// Scientific notation with 17 significant digits; a signed zero prints as `0`.
pub fn format_float(x: f64) -> String {
    let x = x + 0.0;
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write_csv(&self, out: &mut String) {
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Main result table, the echoed input specification and optional companion tables.
#[derive(Debug)]
pub struct Document {
    pub spec: Value,
    pub rows: Table,
    pub companions: Vec<(&'static str, Table)>,
}

impl Document {
    pub fn new(spec: Value, rows: Table) -> Self {
        Self {
            spec,
            rows,
            companions: Vec::new(),
        }
    }

    /// Companion tables follow the main table in CSV after one blank line each.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                self.rows.write_csv(&mut out);
                for (_, table) in &self.companions {
                    out.push('\n');
                    table.write_csv(&mut out);
                }
                out
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("spec".into(), self.spec.clone());
                obj.insert("rows".into(), self.rows.to_json());
                for (name, table) in &self.companions {
                    obj.insert((*name).into(), table.to_json());
                }
                let mut s =
                    serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
                let _ = writeln!(s);
                s
            }
        }
    }
}

pub fn emit(text: &str, output: Option<&Path>) -> io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Document {
        let mut t = Table::new(&["x", "n", "flag", "maybe"]);
        t.push(vec![
            Cell::Num(0.1),
            Cell::Int(3),
            Cell::Bool(true),
            Cell::Empty,
        ]);
        t.push(vec![
            Cell::Num(std::f64::consts::PI),
            Cell::Int(-1),
            Cell::Bool(false),
            Cell::Num(2.0),
        ]);
        let mut d = Document::new(json!({"command": "test"}), t);
        let mut roots = Table::new(&["k", "root"]);
        roots.push(vec![Cell::Int(1), Cell::Num(0.5)]);
        d.companions.push(("roots", roots));
        d
    }

    #[test]
    fn csv_layout() {
        let csv = sample().render(Format::Csv);
        let expect = "x,n,flag,maybe\n\
                      1.0000000000000001e-1,3,1,\n\
                      3.1415926535897931e0,-1,0,2.0000000000000000e0\n\
                      \n\
                      k,root\n\
                      1,5.0000000000000000e-1\n";
        assert_eq!(csv, expect);
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.633915793849633, -1e-300, 123456.789] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["spec"]["command"], "test");
        assert_eq!(v["rows"][0]["n"], 3);
        assert_eq!(v["rows"][0]["flag"], true);
        assert!(v["rows"][0]["maybe"].is_null());
        assert_eq!(v["roots"][0]["root"], 0.5);
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec!["spec", "rows", "roots"]);
    }
}
