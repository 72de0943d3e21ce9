//! Tabular output shared by every subcommand: CSV or JSON, with a fixed
//! number format so that files are reproducible to the byte.

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    /// CSV text; `null` in JSON.
    Label(&'static str),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x.into())
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

/// Twelve significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        String::new()
    }
}

fn json_value(cell: &Cell) -> Value {
    match cell {
        // Round through the text form so JSON and CSV carry the same digits.
        Cell::Num(x) => format_number(*x)
            .parse::<f64>()
            .ok()
            .and_then(Number::from_f64)
            .map_or(Value::Null, Value::Number),
        Cell::Int(i) => Value::from(*i),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Label(_) | Cell::Missing => Value::Null,
    }
}

fn csv_field(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => format_number(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Label(s) => (*s).to_string(),
        Cell::Missing => String::new(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// A single record: rendered as one JSON object rather than an array.
    pub record: bool,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            record: false,
        }
    }

    pub fn record<S: Into<String>>(fields: impl IntoIterator<Item = (S, Cell)>) -> Self {
        let (columns, row): (Vec<String>, Vec<Cell>) = fields.into_iter().map(|(k, v)| (k.into(), v)).unzip();
        Self {
            columns,
            rows: vec![row],
            record: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn object(&self, row: &[Cell]) -> Value {
        let map: Map<String, Value> = self
            .columns
            .iter()
            .zip(row)
            .map(|(k, v)| (k.clone(), json_value(v)))
            .collect();
        Value::Object(map)
    }

    pub fn to_json(&self) -> String {
        let value = if self.record && self.rows.len() == 1 {
            self.object(&self.rows[0])
        } else {
            Value::Array(self.rows.iter().map(|r| self.object(r)).collect())
        };
        let mut s = serde_json::to_string_pretty(&value).expect("JSON values are always serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
