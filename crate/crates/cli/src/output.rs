//! Self-describing CSV / JSON-lines output and the matching reader.

use serde_json::{json, Map, Value};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::cli::Format;
use crate::error::{CliError, CliResult};

const MANIFEST_PREFIX: &str = "# manifest: ";

/// Echo of the invocation, written first in every output.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub command: String,
    pub config_path: Option<PathBuf>,
    pub units: Value,
    pub potential: Value,
    pub format: Format,
    pub seed: Option<u64>,
    /// Free-form details: chosen method path, tolerances, axis names.
    pub extra: Map<String, Value>,
}

impl Manifest {
    pub fn new(command: &str, format: Format) -> Self {
        Self {
            command: command.into(),
            config_path: None,
            units: Value::Null,
            potential: Value::Null,
            format,
            seed: None,
            extra: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.into(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("record".into(), json!("manifest"));
        m.insert("command".into(), json!(self.command));
        m.insert("argv".into(), json!(std::env::args().collect::<Vec<_>>()));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("config_path".into(), json!(self.config_path.as_ref().map(|p| p.display().to_string())));
        m.insert("units".into(), self.units.clone());
        m.insert("potential".into(), self.potential.clone());
        m.insert("output_format".into(), json!(self.format.tag()));
        m.insert("seed".into(), json!(self.seed));
        m.insert("timestamp".into(), json!(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)));
        for (k, v) in &self.extra {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }
}

/// A cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<Option<usize>> for Cell {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Cell::Missing, |n| Cell::Int(n as u64))
    }
}

/// Shortest round-trip text; scientific outside [1e-4, 1e15).
pub fn format_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_num(*v),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            _ => Value::Null,
        }
    }
}

/// Column-named rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|source| CliError::Io { path: p.into(), source })?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

pub fn write_table(manifest: &Manifest, table: &Table, out: Option<&Path>) -> CliResult<()> {
    let mut w = sink(out)?;
    let io = |source| CliError::Io { path: out.map_or_else(|| "<stdout>".into(), Into::into), source };
    match manifest.format {
        Format::Csv => {
            writeln!(w, "{MANIFEST_PREFIX}{}", manifest.to_json()).map_err(io)?;
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&table.columns).map_err(|e| CliError::usage(e.to_string()))?;
            for row in &table.rows {
                csv.write_record(row.iter().map(Cell::csv)).map_err(|e| CliError::usage(e.to_string()))?;
            }
            csv.flush().map_err(io)?;
        }
        Format::Jsonl => {
            writeln!(w, "{}", manifest.to_json()).map_err(io)?;
            for row in &table.rows {
                let obj: Map<String, Value> =
                    table.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                writeln!(w, "{}", Value::Object(obj)).map_err(io)?;
            }
        }
    }
    w.flush().map_err(io)
}

/// Output re-read by [`read_output`].
#[derive(Debug, Clone)]
pub struct Parsed {
    pub manifest: Value,
    pub columns: Vec<String>,
    /// Numbers where the text parses as one, strings otherwise, null for empty cells.
    pub rows: Vec<Vec<Value>>,
}

fn cell_value(s: &str) -> Value {
    if s.is_empty() || s == "nan" {
        Value::Null
    } else if let Ok(v) = s.parse::<f64>() {
        json!(v)
    } else {
        json!(s)
    }
}

/// Reads a file written by this tool (CSV or JSON lines, detected from the first line).
pub fn read_output(path: &Path) -> CliResult<Parsed> {
    let err = |msg: String| CliError::Parse { path: path.into(), msg };
    let file = File::open(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or_else(|| err("empty file".into()))?
        .map_err(|source| CliError::Io { path: path.into(), source })?;
    if let Some(rest) = first.strip_prefix(MANIFEST_PREFIX) {
        let manifest: Value = serde_json::from_str(rest).map_err(|e| err(e.to_string()))?;
        let body: Vec<String> = lines.collect::<Result<_, _>>().map_err(|source| CliError::Io { path: path.into(), source })?;
        let text = body.join("\n");
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let columns = reader.headers().map_err(|e| err(e.to_string()))?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for r in reader.records() {
            let r = r.map_err(|e| err(e.to_string()))?;
            rows.push(r.iter().map(cell_value).collect());
        }
        Ok(Parsed { manifest, columns, rows })
    } else {
        let manifest: Value = serde_json::from_str(&first).map_err(|e| err(e.to_string()))?;
        if manifest.get("record").and_then(Value::as_str) != Some("manifest") {
            return Err(err("first record is not a manifest".into()));
        }
        let mut columns: Vec<String> = Vec::new();
        let mut rows = Vec::new();
        for line in lines {
            let line = line.map_err(|source| CliError::Io { path: path.into(), source })?;
            if line.trim().is_empty() {
                continue;
            }
            let Value::Object(obj) = serde_json::from_str(&line).map_err(|e| err(e.to_string()))? else {
                return Err(err("record is not a JSON object".into()));
            };
            if columns.is_empty() {
                columns = obj.keys().cloned().collect();
            }
            rows.push(columns.iter().map(|k| obj.get(k).cloned().unwrap_or(Value::Null)).collect());
        }
        Ok(Parsed { manifest, columns, rows })
    }
}
