//! Result files: a CSV table of the matrix and a JSON document with the full
//! configuration, parameters, noise models, seeds and per-circuit gate counts.

use crate::experiment::ExperimentResult;
use std::path::Path;
use vdcut_core::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["method", "cnot", "rzz", "expectation", "abs_error"];

fn join(counts: &[usize]) -> String {
    counts.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

fn number(value: Option<f64>) -> String {
    value.map_or_else(|| "NaN".to_string(), |v| format!("{v:.10}"))
}

/// Table rows: `ideal`, then one `noiseless-diag@preset` reference per preset
/// where it was computed,
/// then one `method@preset` row per cell. Count lists are `;`-separated and
/// failed cells report `NaN`.
pub fn to_csv(result: &ExperimentResult) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    writer.write_record(CSV_HEADER).map_err(fail)?;
    writer.write_record(["ideal", "", "", &number(Some(result.ideal)), &number(Some(0.0))]).map_err(fail)?;
    for summary in result.presets.iter().filter(|s| s.noiseless_diag.is_some() || s.noiseless_diag_error.is_some()) {
        let error = summary.noiseless_diag.map(|v| (v - result.ideal).abs());
        writer
            .write_record([
                &format!("noiseless-diag@{}", summary.preset),
                "",
                "",
                &number(summary.noiseless_diag),
                &number(error),
            ])
            .map_err(fail)?;
    }
    for cell in &result.cells {
        writer
            .write_record([
                &cell.label(),
                &join(&cell.cnot),
                &join(&cell.rzz),
                &number(cell.expectation),
                &number(cell.abs_error),
            ])
            .map_err(fail)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn to_json(result: &ExperimentResult) -> String {
    serde_json::to_string_pretty(result).expect("results serialize")
}

pub fn from_json(text: &str) -> Result<ExperimentResult> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("result JSON: {e}")))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `<stem>.csv` and `<stem>.json`.
pub fn emit(result: &ExperimentResult, stem: &Path) -> Result<()> {
    write(&stem.with_extension("csv"), &to_csv(result)?)?;
    write(&stem.with_extension("json"), &to_json(result))
}

/// Writes serializable `rows` as CSV (header from field names), creating
/// parent directories.
pub fn write_csv<R: serde::Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    write(path, &String::from_utf8(bytes).expect("csv output is UTF-8"))
}
