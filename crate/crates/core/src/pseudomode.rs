//! Lorentzian baths, exponential memory kernels, and the pseudomode
//! reduction, together with two independent brute-force oracles.
//!
//! A bath whose spectral density is a finite sum of Lorentzian peaks
//!
//! J(ω) = Σ_l γ_l g_l² / ((γ_l/2)² + (ω − ω_l)²)
//!
//! has the exponential memory kernel G(t) = Σ_l g_l² e^{−(γ_l/2 + iω_l) t},
//! and the excited-state amplitude of a two-level system coupled to it obeys
//! the integro-differential equation
//!
//! dψ₁/dt = −iω₁ ψ₁ − ∫₀ᵗ G(t − t′) ψ₁(t′) dt′.
//!
//! Each peak can be traded for one extra discrete level with complex
//! frequency ω_l − iγ_l/2 (a pseudomode), turning the memory integral into a
//! finite non-Hermitian system. The module provides that construction plus
//! two routes that do not use it: direct trapezoidal integration of the
//! Volterra equation, and unitary evolution of a brute-force discretization
//! of the continuum.

use ndarray::Array2;

use crate::eigh::eigh;
use crate::error::{Error, Result};
use crate::nonhermitian::EffectiveHamiltonian;
use crate::quad::integrate_adaptive_resolved;
use crate::states::DensityMatrix;
use crate::tolerances::Tolerances;
use crate::{C64, CMatrix, CVector};

/// One Lorentzian peak: coupling amplitude g (complex in general), width γ,
/// and center frequency ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianTerm {
    pub coupling: C64,
    pub width: f64,
    pub center: f64,
}

/// System frequency plus the list of bath peaks.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudomodeParams {
    pub omega1: f64,
    pub terms: Vec<LorentzianTerm>,
}

impl PseudomodeParams {
    pub fn new(omega1: f64, terms: Vec<LorentzianTerm>) -> Result<Self> {
        if !omega1.is_finite() {
            return Err(Error::InvalidParameter("system frequency must be finite".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidParameter("at least one bath peak is required".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            if !(t.width.is_finite() && t.width > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "peak {i}: width must be positive, got {}",
                    t.width
                )));
            }
            if !t.center.is_finite() || !t.coupling.re.is_finite() || !t.coupling.im.is_finite() {
                return Err(Error::InvalidParameter(format!("peak {i}: non-finite parameter")));
            }
        }
        Ok(Self { omega1, terms })
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    fn has_complex_coupling(&self) -> bool {
        self.terms.iter().any(|t| t.coupling.im != 0.0)
    }

    /// G(t) = Σ_l g_l² e^{−(γ_l/2 + iω_l) t} for t ≥ 0.
    ///
    /// Complex couplings enter as g_l² (not |g_l|²), matching the kernel the
    /// pseudomode construction reproduces.
    pub fn memory_kernel(&self, t: f64) -> Result<C64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("kernel time must be ≥ 0, got {t}")));
        }
        let mut g = C64::new(0.0, 0.0);
        for term in &self.terms {
            let exponent = C64::new(-0.5 * term.width * t, -term.center * t);
            g += term.coupling * term.coupling * exponent.exp();
        }
        Ok(g)
    }

    /// Pointwise spectral density. Only defined for real couplings; complex
    /// ones are refused rather than guessed at.
    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        if self.has_complex_coupling() {
            return Err(Error::ComplexCoupling);
        }
        let mut j = 0.0;
        for term in &self.terms {
            let g2 = term.coupling.re * term.coupling.re;
            let half = 0.5 * term.width;
            let d = omega - term.center;
            j += term.width * g2 / (half * half + d * d);
        }
        Ok(j)
    }

    /// G(t) recomputed as (1/2π) ∫ e^{−iωt} J(ω) dω by adaptive quadrature,
    /// an independent check on [`Self::memory_kernel`].
    ///
    /// Each peak is integrated over a window that always covers ±40 widths
    /// and grows as needed to push the truncated Lorentzian tails below the
    /// requested accuracy (at t = 0 the tails do not oscillate at all, so
    /// the window must carry the full burden; for larger t the tails dephase
    /// and a ±√(K/t) window suffices). The window is split into a core
    /// segment around the peak and geometrically growing tail segments, and
    /// each segment is integrated with enough forced resolution to see both
    /// the peak shape and every oscillation period of e^{−iωt}.
    pub fn kernel_from_spectral_density(&self, t: f64, rel_tol: f64) -> Result<C64> {
        if self.has_complex_coupling() {
            return Err(Error::ComplexCoupling);
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("kernel time must be ≥ 0, got {t}")));
        }
        let scale: f64 = self.terms.iter().map(|x| x.coupling.norm_sqr()).sum();
        let tail_tol = rel_tol * scale / 10.0;
        let mut total = C64::new(0.0, 0.0);
        for term in &self.terms {
            let g2 = term.coupling.re * term.coupling.re;
            let half = 0.5 * term.width;
            // Per-term tail mass beyond ±W is ≈ γ g²/(π W); pick W to push
            // it below tail_tol, softened by 1/t dephasing when t > 0.
            let k_static = term.width * g2 / (std::f64::consts::PI * tail_tol.max(1e-300));
            let k_osc = if t > 0.0 {
                (2.0 * k_static / t).sqrt()
            } else {
                k_static
            };
            let w = (40.0 * term.width).max(k_osc.min(k_static));
            let f = |omega: f64| {
                let d = omega - term.center;
                let j = term.width * g2 / (half * half + d * d);
                C64::new(0.0, -omega * t).exp() * j
            };

            // Segment edges: core ±40γ, then doubling tail segments.
            let core = 40.0 * term.width;
            let mut edges = vec![core];
            let mut edge = core;
            while edge < w {
                edge = (edge * 2.0).min(w);
                edges.push(edge);
            }
            let n_segments = 2 * edges.len() - 1;
            let seg_tol = tail_tol / (4.0 * n_segments as f64);

            // Forced resolution: enough bisections to resolve the local
            // shape scale and the oscillation within each segment.
            let depth_for = |len: f64, shape: f64| -> u32 {
                let needed = (4.0 * len / shape)
                    .max(4.0 * len * t / (2.0 * std::f64::consts::PI))
                    .max(8.0);
                (needed.log2().ceil() as u32).clamp(3, 18)
            };

            let mut val = integrate_adaptive_resolved(
                &f,
                term.center - core,
                term.center + core,
                seg_tol,
                depth_for(2.0 * core, 0.5 * term.width),
            );
            for pair in edges.windows(2) {
                let (lo, hi) = (pair[0], pair[1]);
                let depth = depth_for(hi - lo, lo);
                val += integrate_adaptive_resolved(
                    &f,
                    term.center + lo,
                    term.center + hi,
                    seg_tol,
                    depth,
                );
                val += integrate_adaptive_resolved(
                    &f,
                    term.center - hi,
                    term.center - lo,
                    seg_tol,
                    depth,
                );
            }
            total += val / (2.0 * std::f64::consts::PI);
        }
        Ok(total)
    }

    /// The pseudomode effective Hamiltonian on the (n+1)-dimensional space
    /// spanned by the system level |1⟩ (index 0 here) and one pseudomode per
    /// peak:
    ///
    /// H_eff = ω₁|1⟩⟨1| + Σ_l [(ω_l − iγ_l/2)|l̃⟩⟨l̃| + g_l(|l̃⟩⟨1| + |1⟩⟨l̃|)]
    ///
    /// Admissibility is checked numerically, which is what rejects complex
    /// coupling combinations that would make a mode grow.
    pub fn effective_hamiltonian(&self, tol: &Tolerances) -> Result<EffectiveHamiltonian> {
        let n = self.n_terms();
        let mut m: CMatrix = Array2::zeros((n + 1, n + 1));
        m[[0, 0]] = C64::new(self.omega1, 0.0);
        for (l, term) in self.terms.iter().enumerate() {
            m[[l + 1, l + 1]] = C64::new(term.center, -0.5 * term.width);
            m[[l + 1, 0]] = term.coupling;
            m[[0, l + 1]] = term.coupling;
        }
        EffectiveHamiltonian::new(m, tol)
    }

    /// Second-order trapezoidal solution of the Volterra equation on a
    /// uniform grid starting at 0: the memory integral uses the trapezoidal
    /// rule and the time step is the implicit trapezoidal rule, whose scalar
    /// implicit equation is solved in closed form.
    pub fn solve_volterra(&self, times: &[f64], psi1_0: C64) -> Result<Vec<C64>> {
        let h = uniform_step(times)?;
        let n_steps = times.len();
        let kernel: Vec<C64> = (0..n_steps)
            .map(|j| self.memory_kernel(j as f64 * h))
            .collect::<Result<_>>()?;

        let i_omega = C64::new(0.0, self.omega1);
        let g0 = kernel[0];
        let denom = C64::new(1.0, 0.0) + 0.5 * h * i_omega + 0.25 * h * h * g0;

        let mut psi = Vec::with_capacity(n_steps);
        psi.push(psi1_0);
        // Running trapezoidal memory sums: mem_k = h(½G_k ψ₀ + Σ_{j=1}^{k−1} G_{k−j} ψ_j).
        for k in 0..n_steps - 1 {
            let mem_k = if k == 0 {
                C64::new(0.0, 0.0)
            } else {
                let mut s = 0.5 * kernel[k] * psi[0];
                for j in 1..k {
                    s += kernel[k - j] * psi[j];
                }
                s * h
            };
            let integral_k = if k == 0 {
                C64::new(0.0, 0.0)
            } else {
                mem_k + 0.5 * h * g0 * psi[k]
            };
            let f_k = -i_omega * psi[k] - integral_k;

            let mut mem_next = 0.5 * kernel[k + 1] * psi[0];
            for j in 1..=k {
                mem_next += kernel[k + 1 - j] * psi[j];
            }
            mem_next *= h;

            let rhs = psi[k] + 0.5 * h * f_k - 0.5 * h * mem_next;
            psi.push(rhs / denom);
        }
        Ok(psi)
    }

    /// Pseudomode amplitudes by explicit convolution,
    /// φ_l(t) = −i g_l ∫₀ᵗ e^{−(γ_l/2 + iω_l)(t−τ)} ψ₁(τ) dτ,
    /// evaluated with the trapezoidal rule on the same grid. Used to
    /// cross-check the components of the effective-Hamiltonian propagation.
    pub fn convolution_amplitudes(&self, times: &[f64], psi1: &[C64]) -> Result<Vec<Vec<C64>>> {
        let h = uniform_step(times)?;
        if psi1.len() != times.len() {
            return Err(Error::DimensionMismatch { left: psi1.len(), right: times.len() });
        }
        let mut out = Vec::with_capacity(self.n_terms());
        for term in &self.terms {
            let s_l = C64::new(0.5 * term.width, term.center);
            let decay: Vec<C64> = (0..times.len())
                .map(|j| (-s_l * (j as f64 * h)).exp())
                .collect();
            let mut phis = Vec::with_capacity(times.len());
            for k in 0..times.len() {
                let mut acc = C64::new(0.0, 0.0);
                if k > 0 {
                    acc += 0.5 * decay[k] * psi1[0];
                    for j in 1..k {
                        acc += decay[k - j] * psi1[j];
                    }
                    acc += 0.5 * psi1[k];
                }
                phis.push(C64::new(0.0, -1.0) * term.coupling * acc * h);
            }
            out.push(phis);
        }
        Ok(out)
    }

    /// Replace the continuum by `n_modes` discrete modes spread uniformly
    /// over the union of the per-peak windows [ω_l − Kγ_l, ω_l + Kγ_l], with
    /// couplings g_k = √(J(ω_k) Δω / 2π) from the midpoint rule.
    pub fn discretize_bath(&self, n_modes: usize, window_k: f64) -> Result<DiscretizedBath> {
        if self.has_complex_coupling() {
            return Err(Error::ComplexCoupling);
        }
        if n_modes < 2 {
            return Err(Error::InvalidParameter(format!(
                "bath discretization needs at least 2 modes, got {n_modes}"
            )));
        }
        if !(window_k.is_finite() && window_k >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "window half-width must be ≥ 1 width, got {window_k}"
            )));
        }
        // Merge overlapping windows into disjoint intervals.
        let mut intervals: Vec<(f64, f64)> = self
            .terms
            .iter()
            .map(|t| (t.center - window_k * t.width, t.center + window_k * t.width))
            .collect();
        intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in intervals {
            match merged.last_mut() {
                Some((_, end)) if a <= *end => *end = end.max(b),
                _ => merged.push((a, b)),
            }
        }
        let total_len: f64 = merged.iter().map(|(a, b)| b - a).sum();
        if !(total_len.is_finite() && total_len > 0.0) {
            return Err(Error::InvalidParameter(
                "bath windows are degenerate; check widths and centers".into(),
            ));
        }

        // Distribute modes across intervals in proportion to length, keeping
        // at least one per interval and the exact total.
        let mut counts: Vec<usize> = merged
            .iter()
            .map(|(a, b)| (((b - a) / total_len) * n_modes as f64).floor().max(1.0) as usize)
            .collect();
        let mut assigned: usize = counts.iter().sum();
        while assigned < n_modes {
            let i = counts
                .iter()
                .enumerate()
                .map(|(i, &c)| (i, (merged[i].1 - merged[i].0) / c as f64))
                .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap()
                .0;
            counts[i] += 1;
            assigned += 1;
        }
        while assigned > n_modes {
            let i = counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 1)
                .map(|(i, &c)| (i, (merged[i].1 - merged[i].0) / c as f64))
                .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap()
                .0;
            counts[i] -= 1;
            assigned -= 1;
        }

        let mut modes = Vec::with_capacity(n_modes);
        for ((a, b), count) in merged.iter().zip(counts.iter()) {
            let dw = (b - a) / *count as f64;
            for j in 0..*count {
                let omega = a + (j as f64 + 0.5) * dw;
                let j_val = self.spectral_density(omega)?;
                modes.push(BathMode {
                    frequency: omega,
                    coupling: (j_val * dw / (2.0 * std::f64::consts::PI)).sqrt(),
                });
            }
        }
        let coupling_mass: f64 = modes.iter().map(|m| m.coupling * m.coupling).sum();
        let kernel_mass: f64 = self.terms.iter().map(|t| t.coupling.norm_sqr()).sum();
        Ok(DiscretizedBath {
            modes,
            window_k,
            coverage: coupling_mass / kernel_mass,
        })
    }
}

/// One discretized bath mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    pub frequency: f64,
    pub coupling: f64,
}

/// A brute-force frequency discretization of the continuum.
#[derive(Debug, Clone)]
pub struct DiscretizedBath {
    pub modes: Vec<BathMode>,
    pub window_k: f64,
    /// Σ g_k² relative to G(0); approaches 1 from below as the window and
    /// mode count grow.
    pub coverage: f64,
}

impl DiscretizedBath {
    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// Unitary evolution of the one-excitation Hamiltonian
    ///
    /// H = ω₁|1⟩⟨1| + Σ_k ω_k|k⟩⟨k| + Σ_k g_k (|k⟩⟨1| + |1⟩⟨k|),
    ///
    /// from ψ(0) = ψ₁(0)|1⟩, via one Hermitian eigendecomposition. Returns
    /// the full state vector per grid time; the system amplitude is
    /// component 0.
    pub fn evolve_friedrichs(
        &self,
        omega1: f64,
        psi1_0: C64,
        times: &[f64],
    ) -> Result<Vec<CVector>> {
        let n = self.n_modes();
        let dim = n + 1;
        let mut h: CMatrix = Array2::zeros((dim, dim));
        h[[0, 0]] = C64::new(omega1, 0.0);
        for (k, mode) in self.modes.iter().enumerate() {
            h[[k + 1, k + 1]] = C64::new(mode.frequency, 0.0);
            h[[0, k + 1]] = C64::new(mode.coupling, 0.0);
            h[[k + 1, 0]] = C64::new(mode.coupling, 0.0);
        }
        let dec = eigh(&h)?;
        // Coefficients of the initial state in the eigenbasis: c = V† ψ₀,
        // and ψ₀ has a single nonzero component.
        let coeffs: Vec<C64> = (0..dim).map(|j| dec.vectors[[0, j]].conj() * psi1_0).collect();

        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidParameter(format!("bad time {t}")));
            }
            let phased: CVector = (0..dim)
                .map(|j| coeffs[j] * C64::new(0.0, -dec.values[j] * t).exp())
                .collect();
            out.push(dec.vectors.dot(&phased));
        }
        Ok(out)
    }
}

/// Two-level reduced state from the vacuum amplitude and the excited
/// amplitude at time t:
///
/// ρ_S = |ψ₁(t)|²|1⟩⟨1| + ψ₁(t)ψ₀*|1⟩⟨0| + h.c. + (1 − |ψ₁(t)|²)|0⟩⟨0|
///
/// `initial` is (vacuum amplitude ψ₀, excited amplitude ψ₁(0)); the pair
/// must be normalized.
pub fn reduced_density_matrix(
    initial: (C64, C64),
    psi1_t: C64,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    let (psi_vac, psi1_0) = initial;
    let norm = psi_vac.norm_sqr() + psi1_0.norm_sqr();
    if (norm - 1.0).abs() > tol.tr.max(1e-9) {
        return Err(Error::InvalidState(format!(
            "initial amplitudes have norm² = {norm}, expected 1"
        )));
    }
    if psi1_t.norm() > psi1_0.norm() + 1e-9 {
        return Err(Error::InvalidState(
            "excited amplitude grew beyond its initial value".into(),
        ));
    }
    let p = psi1_t.norm_sqr();
    let mut rho: CMatrix = Array2::zeros((2, 2));
    rho[[1, 1]] = C64::new(p, 0.0);
    rho[[0, 0]] = C64::new(1.0 - p, 0.0);
    rho[[1, 0]] = psi1_t * psi_vac.conj();
    rho[[0, 1]] = psi_vac * psi1_t.conj();
    DensityMatrix::new(rho, tol)
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points".into()));
    }
    if times[0] != 0.0 {
        return Err(Error::InvalidParameter("grid must start at t = 0".into()));
    }
    let h = times[1] - times[0];
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!("bad grid step {h}")));
    }
    for i in 2..times.len() {
        let step = times[i] - times[i - 1];
        if (step - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::NonUniformGrid { index: i, found: step, expected: h });
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uniform_grid;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single(g: f64, gamma: f64, omega: f64, omega1: f64) -> PseudomodeParams {
        PseudomodeParams::new(
            omega1,
            vec![LorentzianTerm { coupling: c(g, 0.0), width: gamma, center: omega }],
        )
        .unwrap()
    }

    #[test]
    fn kernel_at_zero_is_coupling_squared() {
        let p = single(0.7, 1.3, 0.4, 0.0);
        let g = p.memory_kernel(0.0).unwrap();
        assert!((g - c(0.49, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_respects_decay_envelope() {
        let p = PseudomodeParams::new(
            0.2,
            vec![
                LorentzianTerm { coupling: c(0.5, 0.0), width: 1.0, center: 0.3 },
                LorentzianTerm { coupling: c(0.3, 0.0), width: 2.0, center: -0.8 },
            ],
        )
        .unwrap();
        let bound = |t: f64| (0.25 + 0.09) * (-0.5 * t).exp();
        for &t in &[0.0, 0.5, 1.0, 3.0, 8.0] {
            let g = p.memory_kernel(t).unwrap();
            assert!(g.norm() <= bound(t) + 1e-12, "t={t}: |G|={} bound={}", g.norm(), bound(t));
        }
    }

    #[test]
    fn kernel_rejects_negative_time() {
        let p = single(1.0, 1.0, 0.0, 0.0);
        assert!(p.memory_kernel(-0.1).is_err());
    }

    #[test]
    fn spectral_density_peak_height_and_tails() {
        let g = 0.6;
        let gamma = 0.9;
        let p = single(g, gamma, 1.1, 0.0);
        let peak = p.spectral_density(1.1).unwrap();
        assert!((peak - 4.0 * g * g / gamma).abs() < 1e-12);
        assert!(p.spectral_density(1e6).unwrap() < 1e-9);
        assert!(p.spectral_density(-1e6).unwrap() < 1e-9);
        for &w in &[-3.0, 0.0, 2.0, 5.0] {
            assert!(p.spectral_density(w).unwrap() >= 0.0);
        }
    }

    #[test]
    fn spectral_density_refuses_complex_couplings() {
        let p = PseudomodeParams::new(
            0.0,
            vec![LorentzianTerm { coupling: c(0.5, 0.2), width: 1.0, center: 0.0 }],
        )
        .unwrap();
        assert!(matches!(p.spectral_density(0.0), Err(Error::ComplexCoupling)));
        assert!(p.memory_kernel(1.0).is_ok());
    }

    #[test]
    fn quadrature_matches_kernel_single_peak() {
        let p = single(0.8, 1.2, 0.5, 0.0);
        let scale = 0.64;
        for &t in &[0.0, 0.3, 1.0, 2.5, 6.0] {
            let direct = p.memory_kernel(t).unwrap();
            let quad = p.kernel_from_spectral_density(t, 1e-5).unwrap();
            assert!(
                (direct - quad).norm() <= 1e-4 * scale,
                "t={t}: |Δ|={:.3e}",
                (direct - quad).norm()
            );
        }
    }

    #[test]
    fn quadrature_mass_equals_kernel_at_zero() {
        let p = PseudomodeParams::new(
            0.0,
            vec![
                LorentzianTerm { coupling: c(0.5, 0.0), width: 0.8, center: -1.0 },
                LorentzianTerm { coupling: c(0.7, 0.0), width: 1.5, center: 2.0 },
            ],
        )
        .unwrap();
        let mass = p.kernel_from_spectral_density(0.0, 1e-5).unwrap();
        let g0 = p.memory_kernel(0.0).unwrap();
        assert!((mass - g0).norm() < 1e-4 * g0.norm());
    }

    #[test]
    fn effective_hamiltonian_structure() {
        let p = single(0.5, 1.0, 0.7, 0.3);
        let heff = p.effective_hamiltonian(&tol()).unwrap();
        let m = heff.mat();
        assert_eq!(heff.dim(), 2);
        assert!((m[[0, 0]] - c(0.3, 0.0)).norm() < 1e-15);
        assert!((m[[1, 1]] - C64::new(0.7, -0.5)).norm() < 1e-15);
        assert!((m[[0, 1]] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((m[[1, 0]] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn decoupled_pseudomode_freezes_system() {
        let p = single(0.0, 1.0, 0.7, 0.4);
        let heff = p.effective_hamiltonian(&tol()).unwrap();
        let psi0 = ndarray::arr1(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let times = uniform_grid(5.0, 11).unwrap();
        let psis = heff.evolve_vector(&psi0, &times).unwrap();
        for (k, psi) in psis.iter().enumerate() {
            assert!((psi[0].norm() - 1.0).abs() < 1e-12, "t={}", times[k]);
            assert!(psi[1].norm() < 1e-14);
        }
    }

    #[test]
    fn volterra_free_evolution() {
        // G ≡ 0 reduces the scheme to the trapezoidal rule for
        // dψ/dt = −iω₁ψ; the discrepancy from e^{−iω₁t} must be the usual
        // O(h²) phase error and nothing more.
        let omega1 = 1.7;
        let mut p = single(1.0, 1.0, 0.0, omega1);
        p.terms[0].coupling = c(0.0, 0.0);
        let t_max = 4.0;
        let times = uniform_grid(t_max, 4001).unwrap();
        let h = t_max / 4000.0;
        let bound = t_max * omega1.powi(3) * h * h / 12.0;
        let psi = p.solve_volterra(&times, c(1.0, 0.0)).unwrap();
        for (k, &t) in times.iter().enumerate() {
            let expected = C64::new(0.0, -omega1 * t).exp();
            assert!((psi[k].norm() - 1.0).abs() < 1e-12, "norm drift at t={t}");
            assert!((psi[k] - expected).norm() < 3.0 * bound, "t={t}");
        }
    }

    #[test]
    fn volterra_matches_pseudomode_route() {
        let p = single(0.4, 1.1, 0.2, 0.1);
        let times = uniform_grid(6.0, 4001).unwrap();
        let volterra = p.solve_volterra(&times, c(1.0, 0.0)).unwrap();
        let heff = p.effective_hamiltonian(&tol()).unwrap();
        let psi0 = ndarray::arr1(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let exact = heff.evolve_vector(&psi0, &times).unwrap();
        let mut worst = 0.0f64;
        for (v, e) in volterra.iter().zip(exact.iter()) {
            worst = worst.max((v - e[0]).norm());
        }
        assert!(worst < 2e-6, "sup discrepancy {worst:.3e}");
    }

    #[test]
    fn volterra_richardson_order_is_two() {
        let p = single(0.5, 1.0, 0.3, 0.2);
        let t_max = 4.0;
        let runs: Vec<Vec<C64>> = [501usize, 1001, 2001]
            .iter()
            .map(|&n| {
                let times = uniform_grid(t_max, n).unwrap();
                p.solve_volterra(&times, c(1.0, 0.0)).unwrap()
            })
            .collect();
        // Compare at the shared final point.
        let d1 = (runs[0].last().unwrap() - runs[1].last().unwrap()).norm();
        let d2 = (runs[1].last().unwrap() - runs[2].last().unwrap()).norm();
        let order = (d1 / d2).log2();
        assert!((order - 2.0).abs() < 0.2, "observed order {order}");
    }

    #[test]
    fn volterra_rejects_non_uniform_grid() {
        let p = single(0.5, 1.0, 0.0, 0.0);
        let times = [0.0, 0.1, 0.3, 0.4];
        assert!(matches!(
            p.solve_volterra(&times, c(1.0, 0.0)),
            Err(Error::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn bath_coupling_mass_approaches_kernel() {
        let p = single(0.5, 1.0, 0.0, 0.0);
        let coarse = p.discretize_bath(50, 10.0).unwrap().coverage;
        let fine = p.discretize_bath(2000, 300.0).unwrap().coverage;
        assert!(coarse < fine);
        assert!((fine - 1.0).abs() < 5e-3, "coverage {fine}");
    }

    #[test]
    fn bath_structure_minimal() {
        let p = single(0.5, 1.0, 0.0, 0.0);
        let bath = p.discretize_bath(2, 2.0).unwrap();
        assert_eq!(bath.n_modes(), 2);
        assert!(bath.coverage < 0.9);
    }

    #[test]
    fn friedrichs_decoupled_preserves_amplitude() {
        let p = single(0.5, 1.0, 0.0, 0.6);
        let mut bath = p.discretize_bath(10, 5.0).unwrap();
        for m in &mut bath.modes {
            m.coupling = 0.0;
        }
        let times = uniform_grid(3.0, 7).unwrap();
        let traj = bath.evolve_friedrichs(0.6, c(1.0, 0.0), &times).unwrap();
        for psi in &traj {
            assert!((psi[0].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn friedrichs_conserves_norm() {
        let p = single(0.4, 1.0, 0.1, 0.2);
        let bath = p.discretize_bath(80, 20.0).unwrap();
        let times = uniform_grid(6.0, 13).unwrap();
        let traj = bath.evolve_friedrichs(0.2, c(1.0, 0.0), &times).unwrap();
        for psi in &traj {
            let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12, "norm {norm}");
        }
    }

    #[test]
    fn reduced_state_limits() {
        // ψ₁(t) → 0 leaves the vacuum.
        let rho = reduced_density_matrix((c(0.0, 0.0), c(1.0, 0.0)), c(0.0, 0.0), &tol()).unwrap();
        assert!((rho.mat()[[0, 0]] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(rho.mat()[[1, 0]].norm() < 1e-15);

        // No vacuum amplitude: diagonal with population |ψ₁|².
        let p = 0.36f64;
        let rho2 =
            reduced_density_matrix((c(0.0, 0.0), c(1.0, 0.0)), c(p.sqrt(), 0.0), &tol()).unwrap();
        assert!((rho2.mat()[[1, 1]].re - p).abs() < 1e-12);
        assert!((rho2.mat()[[0, 0]].re - (1.0 - p)).abs() < 1e-12);

        // Superposition keeps the coherence ψ₁ψ₀*.
        let a = 0.6f64;
        let b = 0.8f64;
        let rho3 = reduced_density_matrix(
            (c(a, 0.0), c(b, 0.0)),
            c(0.5 * b, 0.0),
            &tol(),
        )
        .unwrap();
        assert!((rho3.mat()[[1, 0]] - c(0.5 * b * a, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn reduced_state_rejects_unnormalized_input() {
        assert!(reduced_density_matrix((c(0.9, 0.0), c(0.9, 0.0)), c(0.1, 0.0), &tol()).is_err());
    }
}
