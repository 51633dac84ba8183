//! File emission: reports, sample tables, and resolved configs.
//!
//! Identical inputs must produce byte-identical files, so everything routes
//! through the byte-stable JSON writer and a fixed CSV float format.

use std::fs;
use std::path::{Path, PathBuf};

use crate::json::Json;
use crate::CliError;

/// Output selection for `simulate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            other => Err(CliError::config(format!("unknown format '{other}' (json|csv|both)"))),
        }
    }

    pub fn wants_json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn wants_csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::config(format!("cannot create output dir {}: {e}", dir.display())))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

/// `report.json` under `dir`.
pub fn emit_report(report: &Json, dir: &Path) -> Result<PathBuf, CliError> {
    let path = dir.join("report.json");
    write_file(&path, &report.render())?;
    Ok(path)
}

/// Render the `(replication, value)` table.
pub fn render_samples_csv(values: &[f64]) -> String {
    let mut out = String::from("replication,value\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&i.to_string());
        out.push(',');
        // non-finite values keep their Rust spelling; the reader rejects them
        if v.is_finite() {
            out.push_str(&format!("{v:.16e}"));
        } else {
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn emit_samples_csv(values: &[f64], dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    write_file(&path, &render_samples_csv(values))?;
    Ok(path)
}

/// Read a `replication,value` table back.
pub fn read_samples_csv(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim() == "replication,value" => {}
        other => {
            return Err(CliError::config(format!(
                "{}: expected header 'replication,value', got {other:?}",
                path.display()
            )))
        }
    }
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value = line
            .split(',')
            .nth(1)
            .and_then(|f| f.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite())
            .ok_or_else(|| {
                CliError::config(format!(
                    "{}: line {}: malformed sample row '{line}'",
                    path.display(),
                    lineno + 2
                ))
            })?;
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::config(format!("{}: no samples", path.display())));
    }
    Ok(values)
}
