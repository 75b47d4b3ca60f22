//! Result tables and their CSV / JSON encodings.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! parsing an emitted table gives back the same bits.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Na,
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(x) => Some(*x),
            Cell::Na => None,
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.map_or(Cell::Na, Cell::Value))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(x) => write!(f, "{x}"),
            Cell::Na => f.write_str("NA"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub scenario: String,
    pub scenario_sha256: String,
    pub seed: u64,
    pub trials: u64,
    pub methods: Vec<String>,
    pub tool_version: String,
}

/// One row per sweep point, in increasing axis order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub axis: String,
    pub columns: Vec<String>,
    pub rows: Vec<(f64, Vec<Cell>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed table: {0}")]
    Malformed(String),
}

const META_KEYS: [&str; 6] = ["scenario", "scenario_sha256", "seed", "trials", "methods", "tool_version"];

impl ResultTable {
    pub fn new(metadata: Metadata, axis: String, columns: Vec<String>, rows: Vec<(f64, Vec<Cell>)>) -> Self {
        debug_assert!(rows.iter().all(|r| r.1.len() == columns.len()));
        debug_assert!(rows.windows(2).all(|w| w[1].0 > w[0].0));
        Self { metadata, axis, columns, rows }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.1[i]).collect())
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<(), TableError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    pub fn to_string(&self, format: Format) -> Result<String, TableError> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        String::from_utf8(buf).map_err(|e| TableError::Malformed(e.to_string()))
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, TableError> {
        match format {
            Format::Csv => Self::parse_csv(text),
            Format::Json => Ok(serde_json::from_str(text)?),
        }
    }

    fn write_csv<W: Write>(&self, mut out: W) -> Result<(), TableError> {
        let m = &self.metadata;
        let meta = [
            m.scenario.clone(),
            m.scenario_sha256.clone(),
            m.seed.to_string(),
            m.trials.to_string(),
            m.methods.join(","),
            m.tool_version.clone(),
        ];
        for (k, v) in META_KEYS.iter().zip(meta) {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(std::iter::once(&self.axis).chain(&self.columns))?;
        for (x, cells) in &self.rows {
            w.write_record(std::iter::once(x.to_string()).chain(cells.iter().map(Cell::to_string)))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut out: W) -> Result<(), TableError> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    fn parse_csv(text: &str) -> Result<Self, TableError> {
        let mut meta = std::collections::HashMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let (k, v) = line[1..]
                .trim_start()
                .split_once(": ")
                .ok_or_else(|| TableError::Malformed(format!("bad metadata line {line:?}")))?;
            meta.insert(k.to_string(), v.to_string());
        }
        let get = |k: &str| meta.get(k).cloned().ok_or_else(|| TableError::Malformed(format!("missing metadata {k}")));
        let num = |k: &str| get(k)?.parse::<u64>().map_err(|e| TableError::Malformed(format!("{k}: {e}")));
        let metadata = Metadata {
            scenario: get("scenario")?,
            scenario_sha256: get("scenario_sha256")?,
            seed: num("seed")?,
            trials: num("trials")?,
            methods: get("methods")?.split(',').map(str::to_string).collect(),
            tool_version: get("tool_version")?,
        };
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = r.headers()?.clone();
        let mut names = header.iter().map(str::to_string);
        let axis = names.next().ok_or_else(|| TableError::Malformed("empty header".into()))?;
        let columns: Vec<String> = names.collect();
        let number = |s: &str| s.parse::<f64>().map_err(|e| TableError::Malformed(format!("{s:?}: {e}")));
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let mut fields = rec.iter();
            let x = number(fields.next().unwrap_or(""))?;
            let cells = fields
                .map(|f| if f == "NA" { Ok(Cell::Na) } else { number(f).map(Cell::Value) })
                .collect::<Result<Vec<_>, _>>()?;
            if cells.len() != columns.len() {
                return Err(TableError::Malformed(format!("row at {x} has {} cells, expected {}", cells.len(), columns.len())));
            }
            rows.push((x, cells));
        }
        Ok(Self { metadata, axis, columns, rows })
    }
}
