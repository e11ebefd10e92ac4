//! Tables and their CSV / JSON emission.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::{Format, Resolved};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // Shortest round-trip representation: locale-free and stable.
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    fn to_json(&self, config: &Resolved) -> Result<Vec<u8>, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    m.insert((*name).to_string(), cell.json());
                }
                Value::Object(m)
            })
            .collect();
        let doc = serde_json::json!({ "config": config, "rows": rows });
        let mut bytes = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    /// Writes to the configured path (with a `.config.json` sidecar) or to
    /// stdout.
    pub fn emit(&self, config: &Resolved) -> Result<(), CliError> {
        let bytes = match config.format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json(config)?,
        };
        match &config.output {
            Some(path) => {
                write_file(path, &bytes)?;
                let mut sidecar = path.as_os_str().to_owned();
                sidecar.push(".config.json");
                let mut meta = serde_json::to_vec_pretty(config).map_err(|e| CliError::Io(e.to_string()))?;
                meta.push(b'\n');
                write_file(Path::new(&sidecar), &meta)
            }
            None => std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::Io(format!("stdout: {e}"))),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
