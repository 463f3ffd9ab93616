//! Von Neumann and Schrödinger dynamics generated by a dissipative
//! non-Hermitian Hamiltonian.
//!
//! An effective Hamiltonian is admissible when (H_eff − H_eff†)/i is
//! negative semidefinite; equivalently it splits as
//!
//! H_eff = H − (i/2) Σ_l γ_l |l⟩⟨l|
//!
//! with H Hermitian, rates γ_l ≥ 0, and {|l⟩} orthonormal. Propagation is by
//! exact matrix exponential, R(t) = e^{−iH_eff t} R₀ e^{iH_eff† t}, so the
//! trace can only decrease and positivity is preserved by construction.

use ndarray::Array2;

use crate::eigh::eigh;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::linalg::{adjoint, ensure_finite, ensure_square, hermitian_part, outer};
use crate::states::NonNormalizedDensityMatrix;
use crate::tolerances::Tolerances;
use crate::{C64, CMatrix, CVector};

/// A non-Hermitian Hamiltonian with non-increasing normalization.
/// Construction fails with [`Error::NotDissipative`] if any mode would grow.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    mat: CMatrix,
}

impl EffectiveHamiltonian {
    pub fn new(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        ensure_square(&mat)?;
        ensure_finite(&mat)?;
        // M = i(H − H†) is Hermitian; its eigenvalues are the decay rates.
        // A negative eigenvalue of M is a growing mode.
        let m = decay_form(&mat);
        let eigs = eigh(&m)?;
        if eigs.values[0] < -tol.psd {
            return Err(Error::NotDissipative { rate: -eigs.values[0] });
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    /// Split into Hermitian part, decay rates, and decay basis.
    pub fn decompose(&self, tol: &Tolerances) -> Result<HeffDecomposition> {
        let m = decay_form(&self.mat);
        let eigs = eigh(&m)?;
        if eigs.values[0] < -tol.psd {
            return Err(Error::NotDissipative { rate: -eigs.values[0] });
        }
        let gammas: Vec<f64> = eigs
            .values
            .iter()
            .map(|&g| if g < 0.0 { 0.0 } else { g })
            .collect();
        Ok(HeffDecomposition {
            hamiltonian: hermitian_part(&self.mat),
            gammas,
            basis: eigs.vectors,
        })
    }

    /// R(t) = e^{−iH_eff t} R₀ e^{iH_eff† t} on each grid time.
    ///
    /// Every output state is re-validated (Hermitian, PSD, trace ≤ 1);
    /// propagation is stepwise so uniform grids reuse one exponential.
    pub fn evolve_density(
        &self,
        r0: &NonNormalizedDensityMatrix,
        times: &[f64],
        tol: &Tolerances,
    ) -> Result<Vec<NonNormalizedDensityMatrix>> {
        if r0.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: r0.dim() });
        }
        check_times(times)?;
        let mut out = Vec::with_capacity(times.len());
        let mut current = r0.mat().clone();
        let mut prev_t = 0.0;
        let mut cached: Option<(f64, CMatrix)> = None;
        for &t in times {
            let dt = t - prev_t;
            if dt != 0.0 {
                let step = match &cached {
                    // One-ulp grid jitter must not defeat the cache.
                    Some((h, e)) if (*h - dt).abs() <= 1e-12 * dt.abs() => e.clone(),
                    _ => {
                        let e = self.propagator(dt)?;
                        cached = Some((dt, e.clone()));
                        e
                    }
                };
                current = step.dot(&current).dot(&adjoint(&step));
            }
            out.push(NonNormalizedDensityMatrix::new(current.clone(), tol)?);
            prev_t = t;
        }
        Ok(out)
    }

    /// ψ(t) = e^{−iH_eff t} ψ₀ on each grid time.
    pub fn evolve_vector(&self, psi0: &CVector, times: &[f64]) -> Result<Vec<CVector>> {
        if psi0.len() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: psi0.len() });
        }
        check_times(times)?;
        let mut out = Vec::with_capacity(times.len());
        let mut current = psi0.clone();
        let mut prev_t = 0.0;
        let mut cached: Option<(f64, CMatrix)> = None;
        for &t in times {
            let dt = t - prev_t;
            if dt != 0.0 {
                let step = match &cached {
                    // One-ulp grid jitter must not defeat the cache.
                    Some((h, e)) if (*h - dt).abs() <= 1e-12 * dt.abs() => e.clone(),
                    _ => {
                        let e = self.propagator(dt)?;
                        cached = Some((dt, e.clone()));
                        e
                    }
                };
                current = step.dot(&current);
            }
            out.push(current.clone());
            prev_t = t;
        }
        Ok(out)
    }

    /// e^{−iH_eff t}
    pub fn propagator(&self, t: f64) -> Result<CMatrix> {
        let gen = self.mat.mapv(|z| z * C64::new(0.0, -t));
        expm(&gen)
    }
}

/// The admissible split of an effective Hamiltonian.
#[derive(Debug, Clone)]
pub struct HeffDecomposition {
    /// Hermitian part (H_eff + H_eff†)/2.
    pub hamiltonian: CMatrix,
    /// Decay rates γ_l ≥ 0, ascending; entries clamped to 0 when the
    /// eigensolver reports a tiny negative value within tolerance.
    pub gammas: Vec<f64>,
    /// Orthonormal decay basis; column l pairs with `gammas[l]`.
    pub basis: CMatrix,
}

impl HeffDecomposition {
    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    /// H − (i/2) Σ_l γ_l |l⟩⟨l|
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut sum: CMatrix = Array2::zeros((n, n));
        for (l, &g) in self.gammas.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            let v = self.basis.column(l).to_owned();
            sum = sum + outer(&v, &v).mapv(|z| z * g);
        }
        &self.hamiltonian + &sum.mapv(|z| z * C64::new(0.0, -0.5))
    }

    /// d/dt Tr R = −Σ_l γ_l ⟨l|R|l⟩, never positive for a valid state.
    pub fn trace_decay_rate(&self, r: &NonNormalizedDensityMatrix) -> Result<f64> {
        if r.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: r.dim() });
        }
        let mut rate = 0.0;
        for (l, &g) in self.gammas.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            let v = self.basis.column(l);
            let mut expect = C64::new(0.0, 0.0);
            for i in 0..self.dim() {
                for j in 0..self.dim() {
                    expect += v[i].conj() * r.mat()[[i, j]] * v[j];
                }
            }
            rate -= g * expect.re;
        }
        Ok(rate)
    }
}

fn decay_form(h: &CMatrix) -> CMatrix {
    let diff = h - &adjoint(h);
    diff.mapv(|z| z * C64::new(0.0, 1.0))
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("empty time grid".into()));
    }
    let mut prev = 0.0;
    for (i, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidParameter(format!("bad time {t} at index {i}")));
        }
        if t < prev {
            return Err(Error::InvalidParameter(format!(
                "times must be non-decreasing (index {i})"
            )));
        }
        prev = t;
    }
    Ok(())
}
