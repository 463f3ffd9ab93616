//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("index 0 is the vacuum level and cannot be traced out")]
    VacuumIndexTraced,

    #[error("effective Hamiltonian is not dissipative: a mode grows at rate {rate:.3e}")]
    NotDissipative { rate: f64 },

    #[error("state validation failed: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time grid is not uniform: step {found:.6e} at index {index}, expected {expected:.6e}")]
    NonUniformGrid {
        index: usize,
        found: f64,
        expected: f64,
    },

    #[error("too many modes: {n} exceeds the supported limit {limit}")]
    TooManyModes { n: usize, limit: usize },

    #[error("spectral density is only defined for real couplings")]
    ComplexCoupling,

    #[error("eigensolver failed to converge for index {0}")]
    NoConvergence(usize),

    #[error("linear solve hit a singular pivot")]
    SingularMatrix,
}
