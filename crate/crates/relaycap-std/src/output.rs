//! Row tables written as CSV or JSON.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Real(x) => x.to_string(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(x) if x.is_finite() => json!(x),
            Cell::Real(_) | Cell::Missing => Value::Null,
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(u64::from(x))
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Real)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Header fields of the JSON form.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub config: Value,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv_field))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, meta: &Metadata) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        json!({
            "version": meta.version,
            "command": meta.command,
            "seed": meta.seed,
            "config": meta.config,
            "columns": self.columns,
            "rows": rows,
        })
    }

    pub fn write<W: Write>(
        &self,
        format: Format,
        meta: &Metadata,
        mut out: W,
    ) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out).map_err(std::io::Error::other),
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json(meta))?;
                out.write_all(b"\n")
            }
        }
    }
}
