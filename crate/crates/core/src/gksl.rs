//! GKSL (Lindblad) models and a dense Liouvillian propagator, including the
//! constructive map from a dissipative non-Hermitian Hamiltonian to a GKSL
//! model one dimension up.
//!
//! The map appends an absorbing vacuum level at index 0: the Hamiltonian
//! becomes H ⊕ 0 and each decay channel of the effective Hamiltonian turns
//! into a jump operator L_l = √γ_l |0⟩⟨l|. Propagating the reconstructed
//! state with this model reproduces the normalization reconstruction of the
//! non-Hermitian evolution exactly.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::linalg::{
    adjoint, ensure_finite, ensure_square, hermiticity_defect, identity, kron, max_abs,
    unvectorize, vectorize,
};
use crate::nonhermitian::EffectiveHamiltonian;
use crate::states::DensityMatrix;
use crate::tolerances::Tolerances;
use crate::{C64, CMatrix};

/// Jump rates below this are numerical zeros; the corresponding channel is
/// dropped rather than carrying a √γ of pure noise.
pub const RATE_FLOOR: f64 = 1e-14;

/// Largest dimension propagated through the dense Liouvillian exponential;
/// above it the propagator falls back to adaptive Runge–Kutta on the
/// generator.
pub const DENSE_EXPM_LIMIT: usize = 64;

/// A Hamiltonian plus a list of jump operators.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    dim: usize,
    hamiltonian: CMatrix,
    jumps: Vec<CMatrix>,
}

impl LindbladModel {
    pub fn new(hamiltonian: CMatrix, jumps: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let dim = ensure_square(&hamiltonian)?;
        ensure_finite(&hamiltonian)?;
        let defect = hermiticity_defect(&hamiltonian);
        if defect > tol.herm {
            return Err(Error::InvalidState(format!(
                "Hamiltonian Hermiticity defect {defect:.3e}"
            )));
        }
        for j in &jumps {
            if ensure_square(j)? != dim {
                return Err(Error::DimensionMismatch { left: dim, right: j.nrows() });
            }
            ensure_finite(j)?;
        }
        Ok(Self { dim, hamiltonian, jumps })
    }

    /// Lift a dissipative non-Hermitian Hamiltonian of dimension n to a GKSL
    /// model of dimension n+1 with the vacuum at index 0.
    pub fn from_effective_hamiltonian(
        heff: &EffectiveHamiltonian,
        tol: &Tolerances,
    ) -> Result<Self> {
        let dec = heff.decompose(tol)?;
        let n = dec.dim();
        let mut h: CMatrix = Array2::zeros((n + 1, n + 1));
        for i in 0..n {
            for j in 0..n {
                h[[i + 1, j + 1]] = dec.hamiltonian[[i, j]];
            }
        }
        let mut jumps = Vec::new();
        for (l, &g) in dec.gammas.iter().enumerate() {
            if g < RATE_FLOOR {
                continue;
            }
            let root = g.sqrt();
            let mut jump: CMatrix = Array2::zeros((n + 1, n + 1));
            for j in 0..n {
                jump[[0, j + 1]] = root * dec.basis[[j, l]].conj();
            }
            jumps.push(jump);
        }
        // Hermiticity of the embedded block is exact; construct directly.
        Ok(Self { dim: n + 1, hamiltonian: h, jumps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[CMatrix] {
        &self.jumps
    }

    /// Apply the generator: −i[H, ρ] + Σ_l (LρL† − ½L†Lρ − ½ρL†L).
    pub fn apply_generator(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: rho.nrows() });
        }
        let minus_i = C64::new(0.0, -1.0);
        let mut out = (self.hamiltonian.dot(rho) - rho.dot(&self.hamiltonian)).mapv(|z| z * minus_i);
        for l in &self.jumps {
            let ldag = adjoint(l);
            let ldl = ldag.dot(l);
            out = out + l.dot(rho).dot(&ldag)
                - (ldl.dot(rho) + rho.dot(&ldl)).mapv(|z| z * 0.5);
        }
        Ok(out)
    }

    /// The dim² × dim² matrix ℒ with vec(dρ/dt) = ℒ vec(ρ), using row-major
    /// vectorization (vec(AρB) = (A ⊗ Bᵀ) vec(ρ)).
    pub fn liouvillian(&self) -> CMatrix {
        let n = self.dim;
        let eye = identity(n);
        let minus_i = C64::new(0.0, -1.0);
        let h_t = self.hamiltonian.t().to_owned();
        let mut l_mat = (kron(&self.hamiltonian, &eye) - kron(&eye, &h_t)).mapv(|z| z * minus_i);
        for jump in &self.jumps {
            let jconj = jump.mapv(|z| z.conj());
            let jdj = adjoint(jump).dot(jump);
            let jdj_t = jdj.t().to_owned();
            l_mat = l_mat + kron(jump, &jconj)
                - (kron(&jdj, &eye) + kron(&eye, &jdj_t)).mapv(|z| z * 0.5);
        }
        l_mat
    }

    /// ρ(t) = unvec(e^{ℒt} vec ρ₀) on each grid time, with every output
    /// validated as a density matrix.
    pub fn propagate(
        &self,
        rho0: &DensityMatrix,
        times: &[f64],
        tol: &Tolerances,
    ) -> Result<Vec<DensityMatrix>> {
        if rho0.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: rho0.dim() });
        }
        if times.is_empty() {
            return Err(Error::InvalidParameter("empty time grid".into()));
        }
        let mut prev = 0.0;
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() || t < 0.0 || t < prev {
                return Err(Error::InvalidParameter(format!(
                    "times must be non-negative and non-decreasing (index {i})"
                )));
            }
            prev = t;
        }
        if self.dim <= DENSE_EXPM_LIMIT {
            self.propagate_expm(rho0, times, tol)
        } else {
            self.propagate_rk(rho0, times, tol)
        }
    }

    fn propagate_expm(
        &self,
        rho0: &DensityMatrix,
        times: &[f64],
        tol: &Tolerances,
    ) -> Result<Vec<DensityMatrix>> {
        let liou = self.liouvillian();
        let mut out = Vec::with_capacity(times.len());
        let mut v = vectorize(rho0.mat());
        let mut prev_t = 0.0;
        let mut cached: Option<(f64, CMatrix)> = None;
        for &t in times {
            let dt = t - prev_t;
            if dt != 0.0 {
                // Uniform grids produce steps that differ by one ulp;
                // reuse the exponential when the step matches to 1e-12
                // relative (state error ~‖ℒ‖·δdt, far below tolerance).
                let step = match &cached {
                    Some((h, e)) if (*h - dt).abs() <= 1e-12 * dt.abs() => e.clone(),
                    _ => {
                        let e = expm(&liou.mapv(|z| z * dt))?;
                        cached = Some((dt, e.clone()));
                        e
                    }
                };
                v = step.dot(&v);
            }
            out.push(DensityMatrix::new(unvectorize(&v, self.dim), tol)?);
            prev_t = t;
        }
        Ok(out)
    }

    /// Adaptive RK45 (Dormand–Prince) fallback for dimensions where the
    /// dense Liouvillian would not fit.
    fn propagate_rk(
        &self,
        rho0: &DensityMatrix,
        times: &[f64],
        tol: &Tolerances,
    ) -> Result<Vec<DensityMatrix>> {
        let mut out = Vec::with_capacity(times.len());
        let mut rho = rho0.mat().clone();
        let mut t_now = 0.0;
        for &t in times {
            rho = self.rk_advance(rho, t_now, t)?;
            t_now = t;
            out.push(DensityMatrix::new(rho.clone(), tol)?);
        }
        Ok(out)
    }

    fn rk_advance(&self, mut rho: CMatrix, t0: f64, t1: f64) -> Result<CMatrix> {
        const ATOL: f64 = 1e-12;
        const RTOL: f64 = 1e-11;
        let span = t1 - t0;
        if span == 0.0 {
            return Ok(rho);
        }
        let mut h = span.min(0.1 / (1.0 + max_abs(&self.hamiltonian)));
        let mut t = t0;
        let mut steps = 0usize;
        while t < t1 {
            if steps > 2_000_000 {
                return Err(Error::InvalidParameter(
                    "Runge-Kutta step limit exceeded".into(),
                ));
            }
            steps += 1;
            h = h.min(t1 - t);
            let k1 = self.apply_generator(&rho)?;
            let k2 = self.apply_generator(&(&rho + &k1.mapv(|z| z * (h / 5.0))))?;
            let k3 = self.apply_generator(
                &(&rho + &k1.mapv(|z| z * (3.0 * h / 40.0)) + &k2.mapv(|z| z * (9.0 * h / 40.0))),
            )?;
            let k4 = self.apply_generator(
                &(&rho + &k1.mapv(|z| z * (44.0 * h / 45.0))
                    - &k2.mapv(|z| z * (56.0 * h / 15.0))
                    + &k3.mapv(|z| z * (32.0 * h / 9.0))),
            )?;
            let k5 = self.apply_generator(
                &(&rho + &k1.mapv(|z| z * (19372.0 * h / 6561.0))
                    - &k2.mapv(|z| z * (25360.0 * h / 2187.0))
                    + &k3.mapv(|z| z * (64448.0 * h / 6561.0))
                    - &k4.mapv(|z| z * (212.0 * h / 729.0))),
            )?;
            let k6 = self.apply_generator(
                &(&rho + &k1.mapv(|z| z * (9017.0 * h / 3168.0))
                    - &k2.mapv(|z| z * (355.0 * h / 33.0))
                    + &k3.mapv(|z| z * (46732.0 * h / 5247.0))
                    + &k4.mapv(|z| z * (49.0 * h / 176.0))
                    - &k5.mapv(|z| z * (5103.0 * h / 18656.0))),
            )?;
            let next = &rho
                + &k1.mapv(|z| z * (35.0 * h / 384.0))
                + &k3.mapv(|z| z * (500.0 * h / 1113.0))
                + &k4.mapv(|z| z * (125.0 * h / 192.0))
                - &k5.mapv(|z| z * (2187.0 * h / 6784.0))
                + &k6.mapv(|z| z * (11.0 * h / 84.0));
            let k7 = self.apply_generator(&next)?;
            // 4th-order error estimate.
            let err_mat = k1.mapv(|z| z * (71.0 / 57600.0))
                - k3.mapv(|z| z * (71.0 / 16695.0))
                + k4.mapv(|z| z * (71.0 / 1920.0))
                - k5.mapv(|z| z * (17253.0 / 339200.0))
                + k6.mapv(|z| z * (22.0 / 525.0))
                - k7.mapv(|z| z * (1.0 / 40.0));
            let err = max_abs(&err_mat) * h;
            let scale = ATOL + RTOL * max_abs(&next).max(max_abs(&rho));
            if err <= scale {
                t += h;
                rho = next;
            }
            let ratio = if err > 0.0 { (scale / err).powf(0.2) } else { 4.0 };
            h *= 0.9 * ratio.clamp(0.2, 4.0);
        }
        Ok(rho)
    }
}
