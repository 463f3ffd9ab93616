//! Trajectory comparison: sup-norm and L2 distance between two CSV files on
//! the same time grid, over their shared data columns.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct CsvTable {
    pub times: Vec<f64>,
    /// Data columns by header name (diagnostic columns excluded).
    pub columns: BTreeMap<String, Vec<f64>>,
}

const DIAGNOSTIC_COLUMNS: [&str; 2] = ["trace", "min_eig"];

pub fn load_csv(path: &Path) -> CliResult<CsvTable> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config(format!("{}: empty file", path.display())))?;
    let names: Vec<&str> = header.split(',').collect();
    if names.first() != Some(&"t") {
        return Err(CliError::Config(format!(
            "{}: first column must be t, got {:?}",
            path.display(),
            names.first()
        )));
    }
    let mut times = Vec::new();
    let mut data: Vec<Vec<f64>> = vec![Vec::new(); names.len() - 1];
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(CliError::Config(format!(
                "{}: line {} has {} fields, expected {}",
                path.display(),
                lineno + 2,
                fields.len(),
                names.len()
            )));
        }
        let parse = |s: &str| -> CliResult<f64> {
            s.parse::<f64>().map_err(|e| {
                CliError::Config(format!("{}: line {}: {e}", path.display(), lineno + 2))
            })
        };
        times.push(parse(fields[0])?);
        for (i, f) in fields[1..].iter().enumerate() {
            data[i].push(parse(f)?);
        }
    }
    let mut columns = BTreeMap::new();
    for (name, values) in names[1..].iter().zip(data) {
        if DIAGNOSTIC_COLUMNS.contains(name) {
            continue;
        }
        columns.insert(name.to_string(), values);
    }
    Ok(CsvTable { times, columns })
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub rows: usize,
    pub columns_compared: Vec<String>,
    pub sup_distance: f64,
    pub l2_distance: f64,
}

/// Compare two trajectories over the intersection of their data columns.
/// Grids must match pointwise.
pub fn compare(a: &CsvTable, b: &CsvTable) -> CliResult<CompareReport> {
    if a.times.len() != b.times.len() {
        return Err(CliError::Config(format!(
            "grid mismatch: {} vs {} rows",
            a.times.len(),
            b.times.len()
        )));
    }
    for (i, (x, y)) in a.times.iter().zip(b.times.iter()).enumerate() {
        if (x - y).abs() > 1e-12 * x.abs().max(1.0) {
            return Err(CliError::Config(format!(
                "grid mismatch at row {i}: t = {x} vs {y}"
            )));
        }
    }
    let shared: Vec<String> = a
        .columns
        .keys()
        .filter(|k| b.columns.contains_key(*k))
        .cloned()
        .collect();
    if shared.is_empty() {
        return Err(CliError::Config("no shared data columns to compare".into()));
    }
    let mut sup = 0.0f64;
    let mut sum_sq = 0.0f64;
    for name in &shared {
        let ca = &a.columns[name];
        let cb = &b.columns[name];
        for (x, y) in ca.iter().zip(cb.iter()) {
            let d = (x - y).abs();
            sup = sup.max(d);
            sum_sq += d * d;
        }
    }
    Ok(CompareReport {
        rows: a.times.len(),
        columns_compared: shared,
        sup_distance: sup,
        l2_distance: (sum_sq / a.times.len() as f64).sqrt(),
    })
}
