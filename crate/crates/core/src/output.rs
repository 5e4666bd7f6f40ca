//! Persistent outputs: series CSV, report and manifest JSON.
//!
//! Series files have a header row whose first column is `t`; values are
//! written with 17 significant digits so that they parse back to the same
//! `f64`. JSON documents follow struct field order, and maps are sorted.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::experiments::{Epsilon0, ExperimentConfig, ExperimentReport, GridSpec, SeriesTable};

/// Formats a value with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_err(path: &Path, message: impl Into<String>) -> LabError {
    LabError::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

pub fn write_series(table: &SeriesTable, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| LabError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let csv_err = |e: csv::Error| format_err(path, e.to_string());
    w.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&v| format_value(v)))
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| LabError::io(path, e))
}

/// Parses series CSV text. `name` becomes the table's file name.
pub fn parse_series(bytes: &[u8], name: &str) -> Result<SeriesTable> {
    let path = Path::new(name);
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let headers = r
        .headers()
        .map_err(|e| format_err(path, e.to_string()))?
        .clone();
    let columns: Vec<String> = headers.iter().map(str::to_string).collect();
    if columns.first().map(String::as_str) != Some("t") {
        return Err(format_err(path, "first column must be `t`"));
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| format_err(path, e.to_string()))?;
        if record.len() != columns.len() {
            return Err(format_err(
                path,
                format!("row {} has {} fields, expected {}", i + 1, record.len(), columns.len()),
            ));
        }
        let row = record
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format_err(path, format!("row {}: `{s}` is not a number", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(SeriesTable {
        file: name.to_string(),
        columns,
        rows,
    })
}

pub fn read_series(path: &Path) -> Result<SeriesTable> {
    let bytes = fs::read(path).map_err(|e| LabError::io(path, e))?;
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_series(&bytes, &name)
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| LabError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| format_err(path, e.to_string()))?;
    w.write_all(b"\n").map_err(|e| LabError::io(path, e))?;
    w.flush().map_err(|e| LabError::io(path, e))
}

pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_json(report, path)
}

pub fn parse_report(bytes: &[u8]) -> Result<ExperimentReport> {
    serde_json::from_slice(bytes).map_err(|e| format_err(Path::new("<report>"), e.to_string()))
}

pub fn read_report(path: &Path) -> Result<ExperimentReport> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| LabError::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| format_err(path, e.to_string()))
}

/// Everything needed to reproduce a run, plus wall-clock bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon0: Option<Epsilon0>,
    /// Seconds since the Unix epoch.
    pub started_at: f64,
    pub finished_at: f64,
    pub halts: std::collections::BTreeMap<String, crate::integrator::HaltReason>,
    pub outputs: Vec<String>,
}

pub fn unix_time() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

pub fn write_manifest(manifest: &RunManifest, path: &Path) -> Result<()> {
    write_json(manifest, path)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let bytes = fs::read(path).map_err(|e| LabError::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| format_err(path, e.to_string()))
}

/// Writes every table, `report.json` and `manifest.json` under `dir`.
/// Returns the written paths.
pub fn write_study(
    dir: &Path,
    report: &ExperimentReport,
    tables: &[SeriesTable],
    started_at: f64,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let mut written = Vec::new();
    for t in tables {
        let p = dir.join(&t.file);
        write_series(t, &p)?;
        written.push(p);
    }
    let p = dir.join("report.json");
    write_report(report, &p)?;
    written.push(p);
    let cfg = &report.inputs;
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        equation: cfg
            .equation
            .as_ref()
            .and_then(|e| e.build().ok())
            .map(|e| e.name),
        grid: cfg.grid,
        seed: cfg.seed,
        epsilon0: report.epsilon0,
        started_at,
        finished_at: unix_time(),
        halts: report.halts.clone(),
        outputs: written
            .iter()
            .filter_map(|p| p.file_name().map(|s| s.to_string_lossy().into_owned()))
            .collect(),
    };
    let p = dir.join("manifest.json");
    write_manifest(&manifest, &p)?;
    written.push(p);
    Ok(written)
}
