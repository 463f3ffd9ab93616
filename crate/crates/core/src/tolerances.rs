//! Validation tolerances used by state constructors and diagnostics.

use serde::{Deserialize, Serialize};

/// Absolute tolerances for density-matrix validation.
///
/// `herm` bounds the Hermiticity defect max|ρ − ρ†|, `tr` the trace
/// deviation, and `psd` how far below zero the smallest eigenvalue may dip.
/// `psd` is looser than the other two: eigenvalues of a propagated state
/// accumulate more rounding than its entries do.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub tr: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            tr: 1e-10,
            psd: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn new(herm: f64, tr: f64, psd: f64) -> Self {
        Self { herm, tr, psd }
    }
}
