use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Number, Value};

/// Floats are written with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A numeric table written as CSV with `\n` line endings.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| fmt_float(x)))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes to `path`, or to standard output when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> io::Result<()> {
        match path {
            Some(p) => self.write_to(io::BufWriter::new(File::create(p)?)),
            None => self.write_to(io::stdout().lock()),
        }
    }
}

/// Column names for a complex observable.
pub fn complex_columns(name: &str) -> [String; 2] {
    [format!("re_{name}"), format!("im_{name}")]
}

/// Flat key/value summary printed as one JSON object with sorted keys.
#[derive(Default)]
pub struct Summary(Map<String, Value>);

impl Summary {
    pub fn number(&mut self, key: &str, x: f64) -> &mut Self {
        let v = Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
        self.0.insert(key.to_string(), v);
        self
    }

    pub fn text(&mut self, key: &str, s: impl Into<String>) -> &mut Self {
        self.0.insert(key.to_string(), Value::String(s.into()));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.0).expect("string keys serialize")
    }

    pub fn print(&self) {
        println!("{}", self.to_json());
    }
}
