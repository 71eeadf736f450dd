//! Row tables for CSV and JSON output.
//!
//! Numbers are written in Rust's shortest round-trip form (`{:e}` in CSV,
//! the same digits in JSON), so either format reproduces every f64 exactly.
//! Non-finite numbers appear as `inf`, `-inf` and `NaN`; in JSON they are
//! strings.

use std::io::Write;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::metrics::Evaluation;
use crate::scheme::Scheme;
use crate::sweep::{Comparison, Optimum, SweepResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => crate::config::number(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }

    fn parse_csv(s: &str) -> Cell {
        s.parse::<f64>().map_or_else(|_| Cell::Text(s.to_string()), Cell::Num)
    }

    fn from_json(v: &Value) -> Result<Cell> {
        match v {
            Value::Number(n) => Ok(Cell::Num(n.as_f64().expect("finite JSON number"))),
            Value::String(s) if matches!(s.as_str(), "inf" | "-inf" | "NaN") => Ok(Cell::Num(s.parse().unwrap())),
            Value::String(s) => Ok(Cell::Text(s.clone())),
            other => Err(Error::config("rows", format!("unexpected cell {other}"))),
        }
    }

    /// Numeric value, if this is a number cell.
    pub fn num(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }
}

/// Column names plus rows. `notes` are diagnostics that travel with JSON
/// output and are left out of CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

const METRIC_COLUMNS: [&str; 4] = ["fidelity", "efficiency", "gate_time", "flags"];

fn metric_cells(e: &Evaluation) -> [Cell; 4] {
    [
        Cell::Num(e.metrics.fidelity),
        Cell::Num(e.metrics.efficiency),
        Cell::Num(e.metrics.gate_time),
        Cell::Text(e.flags.to_string()),
    ]
}

fn param_columns(n: usize) -> Vec<String> {
    (0..n).map(|i| if i == 0 { "param".to_string() } else { format!("param{}", i + 1) }).collect()
}

impl Table {
    /// One row; the param column holds the scheme label.
    pub fn from_evaluation(scheme: Scheme, e: &Evaluation) -> Table {
        let mut row = vec![Cell::Text(scheme.label().to_string())];
        row.extend(metric_cells(e));
        Table {
            columns: param_columns(1).into_iter().chain(METRIC_COLUMNS.map(String::from)).collect(),
            rows: vec![row],
            notes: Vec::new(),
        }
    }

    pub fn from_sweep(r: &SweepResult) -> Table {
        let rows = r
            .rows
            .iter()
            .map(|row| {
                let mut cells: Vec<Cell> = row.params.iter().map(|v| Cell::Num(*v)).collect();
                cells.extend(metric_cells(&row.evaluation));
                cells
            })
            .collect();
        let notes = r.axes.iter().enumerate().map(|(i, a)| format!("{} = {a}", param_columns(i + 1)[i])).collect();
        Table {
            columns: param_columns(r.axes.len()).into_iter().chain(METRIC_COLUMNS.map(String::from)).collect(),
            rows,
            notes,
        }
    }

    pub fn from_optimum(o: &Optimum) -> Table {
        let mut row = vec![Cell::Num(o.argmax)];
        row.extend(metric_cells(&o.evaluation));
        Table {
            columns: param_columns(1).into_iter().chain(METRIC_COLUMNS.map(String::from)).collect(),
            rows: vec![row],
            notes: vec![format!("param = {}", o.path), format!("golden-section iterations: {}", o.iterations)],
        }
    }

    /// Wide layout: `param`, then `<scheme>_<metric>` for every kept scheme.
    pub fn from_comparison(c: &Comparison) -> Table {
        let mut columns = param_columns(1);
        for col in &c.columns {
            columns.extend(METRIC_COLUMNS.iter().map(|m| format!("{}_{m}", col.scheme)));
        }
        let rows = c
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut cells = vec![Cell::Num(*v)];
                for col in &c.columns {
                    cells.extend(metric_cells(&col.rows[i]));
                }
                cells
            })
            .collect();
        let mut notes = vec![format!("param = {}", c.axis)];
        notes.extend(c.skipped.iter().map(|(_, why)| format!("skipped: {why}")));
        Table { columns, rows, notes }
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of a numeric column.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column(name)?;
        self.rows.iter().map(|r| r[i].num()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Numerical(format!("cannot write CSV: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Numerical(format!("cannot write CSV: {e}")))
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::config("<csv>", e.to_string());
        let columns = r.headers().map_err(bad)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(Cell::parse_csv).collect()))
            .collect::<std::result::Result<_, _>>()
            .map_err(bad)?;
        Ok(Table { columns, rows, notes: Vec::new() })
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Table> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::config("<json>", e.to_string()))?;
        let strings = |key: &str| -> Result<Vec<String>> {
            match v.get(key) {
                None => Ok(Vec::new()),
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|s| s.as_str().map(String::from).ok_or_else(|| Error::config(key, "expected strings")))
                    .collect(),
                Some(_) => Err(Error::config(key, "expected an array")),
            }
        };
        let columns = strings("columns")?;
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::config("rows", "expected an array of rows"))?
            .iter()
            .map(|row| {
                let cells = row.as_array().ok_or_else(|| Error::config("rows", "expected an array"))?;
                if cells.len() != columns.len() {
                    return Err(Error::config("rows", "row length differs from the header"));
                }
                cells.iter().map(Cell::from_json).collect()
            })
            .collect::<Result<_>>()?;
        Ok(Table { columns, rows, notes: strings("notes")? })
    }
}
