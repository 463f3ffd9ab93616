//! Pseudomode dynamics for open quantum systems.
//!
//! The crate covers the full pipeline from a Lorentzian bath description to
//! finite-dimensional master-equation dynamics:
//!
//! * [`states`] — density matrices with trace deficits, normalization
//!   reconstruction onto an absorbing vacuum level, and index-set partial
//!   traces.
//! * [`nonhermitian`] — decomposition and exact propagation of von Neumann /
//!   Schrödinger dynamics generated by a dissipative non-Hermitian
//!   Hamiltonian.
//! * [`gksl`] — the constructive map from such a Hamiltonian to a GKSL
//!   (Lindblad) model one dimension up, plus a dense Liouvillian propagator.
//! * [`secondquant`] — one-particle second quantization into a register of
//!   two-level modes, used as an independent tensor-space oracle.
//! * [`pseudomode`] — Lorentzian spectral densities, exponential memory
//!   kernels, the pseudomode effective Hamiltonian, and two brute-force
//!   oracles (Volterra integration and a discretized-bath Friedrichs model).
//! * [`scenarios`] — closed-form resonance solutions, Van Hove–Bogolyubov
//!   scaling limits, a finite-temperature deformation generator, and the
//!   FMO-dimer parameter analysis.
//!
//! All operations are pure functions of immutable inputs and are safe to call
//! concurrently.

pub mod error;
pub mod eigh;
pub mod expm;
pub mod gksl;
pub mod linalg;
pub mod nonhermitian;
pub mod pseudomode;
pub mod quad;
pub mod scenarios;
pub mod secondquant;
pub mod states;
pub mod superop;
pub mod tolerances;

pub use error::{Error, Result};
pub use tolerances::Tolerances;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Dense complex square matrix.
pub type CMatrix = ndarray::Array2<C64>;

/// Dense complex vector.
pub type CVector = ndarray::Array1<C64>;

/// Uniform time grid from 0 to `t_max` inclusive.
pub fn uniform_grid(t_max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "time grid needs at least 2 points, got {points}"
        )));
    }
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    let h = t_max / (points - 1) as f64;
    Ok((0..points).map(|k| k as f64 * h).collect())
}
