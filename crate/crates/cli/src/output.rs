//! Tables, headers and number formatting shared by every subcommand.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{ExperimentConfig, Format};

/// Significant digits of every floating-point output value.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` with [`SIG_DIGITS`] significant digits, in positional
/// notation for moderate magnitudes and scientific notation otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..15).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// `x` rounded to [`SIG_DIGITS`] significant digits, for JSON output.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().unwrap()
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_sig(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // JSON has no infinities
            Cell::Float(v) if !v.is_finite() => json!(fmt_sig(*v)),
            Cell::Float(v) => json!(round_sig(*v)),
            Cell::Bool(b) => json!(b),
            Cell::Text(t) => json!(t),
            Cell::Null => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.name);
        self.rows.push(row);
    }

    fn write_csv(&self, out: &mut String) {
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }

    fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// Everything a subcommand produces.
///
/// The first table is the main result (`rows` in JSON); further tables
/// follow as extra CSV sections and named JSON members. `details` is an
/// optional JSON-only payload.
#[derive(Debug, Clone)]
pub struct Document {
    pub tables: Vec<Table>,
    pub details: Option<Value>,
}

impl Document {
    pub fn table(t: Table) -> Self {
        Document { tables: vec![t], details: None }
    }
}

#[derive(Serialize)]
struct Header<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a ExperimentConfig,
    seed: u64,
    timestamp: String,
}

fn header(config: &ExperimentConfig) -> Header<'_> {
    let timestamp = time::OffsetDateTime::now_utc()
        .replace_nanosecond(0)
        .ok()
        .and_then(|t| t.format(&time::format_description::well_known::Rfc3339).ok())
        .unwrap_or_default();
    Header { tool: "asmdist", version: env!("CARGO_PKG_VERSION"), config, seed: config.seed, timestamp }
}

/// Line prefix of the timestamp in CSV headers.
pub const TIMESTAMP_PREFIX: &str = "# timestamp: ";

pub fn render(doc: &Document, config: &ExperimentConfig) -> String {
    let h = header(config);
    match config.format {
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# tool: {} {}\n", h.tool, h.version));
            out.push_str(&format!("# config: {}\n", serde_json::to_string(h.config).unwrap()));
            out.push_str(&format!("# seed: {}\n", h.seed));
            out.push_str(&format!("{TIMESTAMP_PREFIX}{}\n", h.timestamp));
            for (i, t) in doc.tables.iter().enumerate() {
                if i > 0 {
                    out.push_str(&format!("\n# section: {}\n", t.name));
                }
                t.write_csv(&mut out);
            }
            out
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("header".into(), serde_json::to_value(&h).unwrap());
            if let Some((main, rest)) = doc.tables.split_first() {
                obj.insert("rows".into(), main.to_json());
                for t in rest {
                    obj.insert(t.name.into(), t.to_json());
                }
            }
            if let Some(d) = &doc.details {
                obj.insert("details".into(), d.clone());
            }
            let mut text = serde_json::to_string_pretty(&Value::Object(obj)).unwrap();
            text.push('\n');
            text
        }
    }
}

pub fn write_to<W: Write>(out: &mut W, text: &str) -> std::io::Result<()> {
    out.write_all(text.as_bytes())?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(2.954242509439325), "2.95424250944");
        assert_eq!(fmt_sig(0.01), "0.0100000000000");
        assert_eq!(fmt_sig(1234.5), "1234.50000000");
        assert_eq!(fmt_sig(-0.5), "-0.500000000000");
        assert_eq!(fmt_sig(1e20), "1.00000000000e20");
        assert_eq!(fmt_sig(3.2e-9), "3.20000000000e-9");
        assert_eq!(fmt_sig(9.9999999999996), "10.0000000000");
        assert_eq!(fmt_sig(0.0), "0.00000000000");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
    }

    #[test]
    fn rounding_is_stable() {
        for x in [0.1 + 0.2, 1.0 / 3.0, 12345.678901234567, 7.0e-3] {
            let r = round_sig(x);
            assert_eq!(fmt_sig(r), fmt_sig(x));
            assert_eq!(round_sig(r), r);
        }
    }
}
