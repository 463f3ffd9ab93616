//! Trajectory containers and deterministic file emission.
//!
//! CSV values carry 17 significant digits so identical configs produce
//! bit-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use vibron::states::validate_density_matrix;
use vibron::{CMatrix, Tolerances, C64};

use crate::error::{CliError, CliResult};

/// FNV-1a over the raw config text; recorded in summaries so outputs can be
/// traced back to their inputs.
pub fn config_hash(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// A density-matrix trajectory with strictly increasing times.
pub struct MatrixTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CMatrix>,
    /// Requested elements as (row, col); defaults to all.
    pub elements: Vec<(usize, usize)>,
    pub solver: &'static str,
}

impl MatrixTrajectory {
    pub fn new(
        times: Vec<f64>,
        states: Vec<CMatrix>,
        elements: Option<Vec<(usize, usize)>>,
        solver: &'static str,
    ) -> CliResult<Self> {
        if times.len() != states.len() {
            return Err(CliError::Config(format!(
                "trajectory has {} times but {} states",
                times.len(),
                states.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("times must be strictly increasing".into()));
        }
        let dim = states.first().map(|s| s.nrows()).unwrap_or(0);
        let elements = match elements {
            Some(e) => {
                for &(i, j) in &e {
                    if i >= dim || j >= dim {
                        return Err(CliError::Config(format!(
                            "element ({i},{j}) out of range for dimension {dim}"
                        )));
                    }
                }
                e
            }
            None => (0..dim)
                .flat_map(|i| (0..dim).map(move |j| (i, j)))
                .collect(),
        };
        Ok(Self { times, states, elements, solver })
    }

    /// Columns: t, rho_{i}{j}_re, rho_{i}{j}_im per requested element, then
    /// trace and min_eig diagnostics.
    pub fn write_csv(&self, path: &Path, tol: &Tolerances) -> CliResult<()> {
        let mut out = String::new();
        out.push('t');
        for &(i, j) in &self.elements {
            out.push_str(&format!(",rho_{i}{j}_re,rho_{i}{j}_im"));
        }
        out.push_str(",trace,min_eig\n");
        for (t, state) in self.times.iter().zip(self.states.iter()) {
            let report = validate_density_matrix(state, tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            out.push_str(&fmt(*t));
            for &(i, j) in &self.elements {
                let z = state[[i, j]];
                out.push(',');
                out.push_str(&fmt(z.re));
                out.push(',');
                out.push_str(&fmt(z.im));
            }
            out.push(',');
            out.push_str(&fmt(report.trace_re));
            out.push(',');
            out.push_str(&fmt(report.min_eigenvalue));
            out.push('\n');
        }
        write_file(path, out.as_bytes())
    }

    /// Validate every state; returns one message per violation.
    pub fn check_states(&self, tol: &Tolerances) -> CliResult<Vec<String>> {
        let mut failures = Vec::new();
        for (t, state) in self.times.iter().zip(self.states.iter()) {
            let report = validate_density_matrix(state, tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            if !report.passes(tol) {
                failures.push(format!("t = {t}: {report}"));
            }
        }
        Ok(failures)
    }
}

/// An amplitude trajectory (t, ψ) with |ψ|² emitted alongside.
pub struct AmplitudeTrajectory {
    pub times: Vec<f64>,
    pub amplitudes: Vec<C64>,
    pub solver: &'static str,
}

impl AmplitudeTrajectory {
    pub fn write_csv(&self, path: &Path) -> CliResult<()> {
        let mut out = String::from("t,psi_re,psi_im,abs2\n");
        for (t, psi) in self.times.iter().zip(self.amplitudes.iter()) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt(*t),
                fmt(psi.re),
                fmt(psi.im),
                fmt(psi.norm_sqr())
            ));
        }
        write_file(path, out.as_bytes())
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| CliError::Io {
                path: parent.display().to_string(),
                source: e,
            })?;
        }
    }
    fs::write(path, bytes).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Run metadata recorded in every summary file.
#[derive(Debug, Serialize)]
pub struct RunMetadata {
    pub scenario: String,
    pub solver: String,
    pub tolerances: Tolerances,
    pub config_hash: String,
}

pub fn write_summary(path: &Path, metadata: &RunMetadata, body: Value) -> CliResult<()> {
    let mut root = serde_json::to_value(metadata).expect("metadata serializes");
    if let (Value::Object(map), Value::Object(extra)) = (&mut root, body) {
        for (k, v) in extra {
            map.insert(k, v);
        }
    }
    let text = serde_json::to_string_pretty(&root).expect("summary serializes");
    write_file(path, format!("{text}\n").as_bytes())
}

/// Output paths for one run, derived from the out-dir, scenario name, and an
/// optional sweep suffix.
pub struct OutputPaths {
    pub csv: PathBuf,
    pub summary: PathBuf,
}

pub fn output_paths(out_dir: &Path, scenario: &str, suffix: Option<&str>) -> OutputPaths {
    let stem = match suffix {
        Some(s) => format!("{scenario}_{s}"),
        None => scenario.to_string(),
    };
    OutputPaths {
        csv: out_dir.join(format!("{stem}.csv")),
        summary: out_dir.join(format!("{stem}_summary.json")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        assert_eq!(config_hash(""), "cbf29ce484222325");
        assert_eq!(config_hash("a"), config_hash("a"));
        assert_ne!(config_hash("a"), config_hash("b"));
    }

    #[test]
    fn seventeen_digit_format() {
        assert_eq!(fmt(1.0), "1.0000000000000000e0");
        assert_eq!(fmt(0.1), "1.0000000000000001e-1");
    }
}
