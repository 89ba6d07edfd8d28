//! Tables with a metadata header, written as CSV or JSON.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// `[re, im]`, the lossless JSON form of an amplitude.
pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn amplitudes_json(amps: &[Complex64]) -> Value {
    Value::Array(amps.iter().copied().map(complex_json).collect())
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    /// Derived scalars worth recording next to the table.
    pub notes: BTreeMap<String, String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// JSON-only payload, e.g. full state vectors.
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64, columns: &[&'static str]) -> Self {
        Self {
            command: command.to_owned(),
            seed,
            parameters: BTreeMap::new(),
            notes: BTreeMap::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn note(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.notes.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, String> {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> Result<Vec<u8>, String> {
        let mut out = format!(
            "# tool: qgrav {}\n# command: {}\n# seed: {}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.seed
        );
        for (k, v) in &self.parameters {
            out.push_str(&format!("# param {k} = {v}\n"));
        }
        for (k, v) in &self.notes {
            out.push_str(&format!("# result {k} = {v}\n"));
        }
        let mut w = csv::Writer::from_writer(out.into_bytes());
        w.write_record(&self.columns).map_err(|e| e.to_string())?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))
                .map_err(|e| e.to_string())?;
        }
        w.into_inner().map_err(|e| e.to_string())
    }

    fn json(&self) -> Result<Vec<u8>, String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| ((*c).to_owned(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("tool".into(), json!("qgrav"));
        doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        doc.insert("command".into(), json!(self.command));
        doc.insert("seed".into(), json!(self.seed));
        doc.insert("parameters".into(), json!(self.parameters));
        if !self.notes.is_empty() {
            doc.insert("results".into(), json!(self.notes));
        }
        doc.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.extra {
            doc.insert(k.clone(), v.clone());
        }
        let mut bytes = serde_json::to_vec(&Value::Object(doc)).map_err(|e| e.to_string())?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}
