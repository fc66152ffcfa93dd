//! Deterministic JSON and CSV reports.
//!
//! Object keys are sorted, floats are written with 17 significant digits and
//! non-finite floats become the strings `"NaN"`, `"inf"` and `"-inf"`, so
//! identical runs produce identical bytes.

use serde::Serialize;
use serde_json::{Map, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::inequality_lab::IneqReport;

pub const REPORT_VERSION: &str = "1";

/// One report row: a canonical cell key and the check it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub key: String,
    pub report: IneqReport,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub meta: Map<String, Value>,
    pub cells: Vec<Cell>,
}

/// Output file format selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            other => Err(Error::Config(format!("format must be json, csv or both, got '{other}'"))),
        }
    }
}

/// JSON value for a float; non-finite values become strings.
pub fn float_value(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("NaN")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        float_value(x).as_str().unwrap_or("NaN").to_string()
    }
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_meta(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.meta.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn push(&mut self, key: impl Into<String>, report: IneqReport) {
        self.cells.push(Cell {
            key: key.into(),
            report,
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.report.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    fn cell_value(cell: &Cell) -> Result<Value> {
        let r = &cell.report;
        let mut value = serde_json::to_value(r)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::Config("report did not serialize to an object".into()))?;
        for (key, x) in [("lhs", r.lhs), ("rhs", r.rhs), ("slack", r.slack), ("abs_tol", r.abs_tol)] {
            obj.insert(key.to_string(), float_value(x));
        }
        let mut constants = Map::new();
        for (key, c) in &r.constants {
            let mut entry = Map::new();
            entry.insert("provenance".into(), serde_json::to_value(c.provenance)?);
            entry.insert("value".into(), float_value(c.value));
            constants.insert(key.clone(), Value::Object(entry));
        }
        obj.insert("constants".into(), Value::Object(constants));
        obj.insert("cell".into(), Value::from(cell.key.as_str()));
        Ok(value)
    }

    pub fn to_value(&self) -> Result<Value> {
        let cells = self.cells.iter().map(Self::cell_value).collect::<Result<Vec<_>>>()?;
        let mut top = Map::new();
        top.insert("cells".into(), Value::Array(cells));
        top.insert("meta".into(), Value::Object(self.meta.clone()));
        Ok(Value::Object(top))
    }

    /// Canonical JSON text.
    pub fn to_json(&self) -> Result<String> {
        let mut out = String::new();
        write_value(&mut out, &self.to_value()?, 0);
        out.push('\n');
        Ok(out)
    }

    /// CSV with one row per cell.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["cell", "name", "pass", "lhs", "rhs", "slack", "abs_tol", "note", "constants", "inputs"])?;
        for cell in &self.cells {
            let r = &cell.report;
            let constants: Vec<String> = r
                .constants
                .iter()
                .map(|(k, c)| format!("{k}={}", format_float(c.value)))
                .collect();
            let mut inputs = String::new();
            write_value(&mut inputs, &Value::Object(r.inputs.clone().into_iter().collect()), usize::MAX);
            writer.write_record([
                cell.key.as_str(),
                r.name.as_str(),
                if r.pass { "true" } else { "false" },
                &format_float(r.lhs),
                &format_float(r.rhs),
                &format_float(r.slack),
                &format_float(r.abs_tol),
                r.note.as_deref().unwrap_or(""),
                &constants.join(";"),
                &inputs,
            ])?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(format!("CSV is not UTF-8: {e}")))
    }

    /// Writes the requested formats next to `path` (extension replaced by
    /// `.json` / `.csv`) and returns the written paths.
    pub fn emit(&self, format: Format, path: &Path) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        if matches!(format, Format::Json | Format::Both) {
            let target = path.with_extension("json");
            write_atomic(&target, self.to_json()?.as_bytes())?;
            written.push(target);
        }
        if matches!(format, Format::Csv | Format::Both) {
            let target = path.with_extension("csv");
            write_atomic(&target, self.to_csv()?.as_bytes())?;
            written.push(target);
        }
        Ok(written)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Pretty printer with a fixed float format; `indent == usize::MAX` writes one line.
fn write_value(out: &mut String, value: &Value, indent: usize) {
    let compact = indent == usize::MAX;
    let pad = |out: &mut String, level: usize| {
        if !compact {
            out.push('\n');
            out.push_str(&"  ".repeat(level));
        }
    };
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                pad(out, indent.saturating_add(1));
                write_value(out, item, if compact { indent } else { indent + 1 });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                pad(out, indent.saturating_add(1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(if compact { ":" } else { ": " });
                write_value(out, &map[key], if compact { indent } else { indent + 1 });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality_lab::Provenance;

    fn sample() -> Report {
        let mut report = Report::new();
        report.set_meta("seed", 7u64).unwrap();
        report.push(
            "b",
            IneqReport::evaluate("rlsi-even", 1.0, 2.0 * 2f64.ln())
                .with_constant("kappa_e", 2.0 * 2f64.ln(), Provenance::ClosedForm)
                .with_input("trial", "psi0"),
        );
        report.push("a", IneqReport::marker("ht", "divergent"));
        report
    }

    #[test]
    fn json_is_canonical() {
        let text = sample().to_json().unwrap();
        assert_eq!(text, sample().to_json().unwrap());
        assert!(text.contains("\"lhs\": 1.0000000000000000e0"));
        assert!(text.contains("\"lhs\": \"NaN\""));
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["cells"][0]["cell"], "b");
        assert_eq!(parsed["cells"][0]["constants"]["kappa_e"]["provenance"], "closed-form");
    }

    #[test]
    fn empty_report_is_valid() {
        let text = Report::new().to_json().unwrap();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["cells"], Value::Array(vec![]));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = sample().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("cell,name,pass"));
    }

    #[test]
    fn atomic_emit() {
        let dir = tempfile::tempdir().unwrap();
        let paths = sample().emit(Format::Both, &dir.path().join("out")).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.exists()));
        assert!(sample().emit(Format::Json, Path::new("/nonexistent/dir/out")).is_err());
    }
}
