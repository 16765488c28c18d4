//! Tabular and key-value results rendered as CSV or JSON.
//!
//! CSV floats carry 17 significant digits. JSON uses the shortest
//! representation that round-trips, so both formats parse to the same values.

use serde_json::{Map, Number, Value};
use std::io::{self, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Null => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Ordered key-value record.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record {
    pub fields: Vec<(String, Cell)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["quantity", "value"]);
        for (k, v) in &self.fields {
            t.push(vec![Cell::Text(k.clone()), v.clone()]);
        }
        t
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.fields.iter().map(|(k, v)| (k.clone(), v.json())).collect())
    }
}

/// Result of one subcommand.
#[derive(Clone, Debug, PartialEq)]
pub enum Report {
    Table(Table),
    Record(Record),
    /// A table plus a summary record: CSV writes the table to the main output
    /// and the summary to a side file, JSON nests both in one object.
    Spectrum {
        table: Table,
        summary: Record,
    },
}

impl Report {
    pub fn render<W: Write>(&self, format: Format, mut out: W) -> io::Result<()> {
        match (self, format) {
            (Report::Table(t), Format::Csv) => t.write_csv(out),
            (Report::Record(r), Format::Csv) => r.to_table().write_csv(out),
            (Report::Spectrum { table, .. }, Format::Csv) => table.write_csv(out),
            (_, Format::Json) => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Report::Table(t) => t.to_json(),
            Report::Record(r) => r.to_json(),
            Report::Spectrum { table, summary } => {
                let mut obj = Map::new();
                obj.insert("spectrum".into(), table.to_json());
                obj.insert("summary".into(), summary.to_json());
                Value::Object(obj)
            }
        }
    }
}
