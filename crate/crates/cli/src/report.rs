//! Row-oriented report writer with a CSV and a JSON-lines backend.
//!
//! CSV numbers are printed with 17 significant digits (`{:.16e}`), which round-trip
//! every f64. JSON numbers use serde_json's shortest round-trip form; non-finite
//! values become `null`.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliResult;

#[derive(Debug, Clone)]
pub enum Cell {
    Str(String),
    Num(f64),
    Int(u64),
    Bool(bool),
    Coords(Vec<f64>),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Coords(c) => c.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(";"),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        let num = |v: f64| serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number);
        match self {
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Num(v) => num(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Coords(c) => Value::Array(c.iter().map(|v| num(*v)).collect()),
            Cell::Empty => Value::Null,
        }
    }
}

enum Backend<'w> {
    Csv(csv::Writer<&'w mut dyn Write>),
    Jsonl(&'w mut dyn Write),
}

pub struct Table<'w> {
    header: Vec<&'static str>,
    backend: Backend<'w>,
}

impl<'w> Table<'w> {
    pub fn new(out: &'w mut dyn Write, format: Format, header: &[&'static str]) -> CliResult<Table<'w>> {
        let backend = match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(header)?;
                Backend::Csv(w)
            }
            Format::Jsonl => Backend::Jsonl(out),
        };
        Ok(Table {
            header: header.to_vec(),
            backend,
        })
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> CliResult<()> {
        debug_assert_eq!(cells.len(), self.header.len());
        match &mut self.backend {
            Backend::Csv(w) => w.write_record(cells.iter().map(Cell::csv_text))?,
            Backend::Jsonl(w) => {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(&cells)
                    .map(|(k, c)| (k.to_string(), c.json()))
                    .collect();
                serde_json::to_writer(&mut **w, &Value::Object(obj)).map_err(std::io::Error::from)?;
                w.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> CliResult<()> {
        match self.backend {
            Backend::Csv(mut w) => w.flush()?,
            Backend::Jsonl(w) => w.flush()?,
        }
        Ok(())
    }
}
