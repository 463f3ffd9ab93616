//! One-particle second quantization into a register of two-level modes.
//!
//! An (n+1)-level state with vacuum at index 0 embeds into n qubits: level l
//! maps to the basis vector with only mode l excited, and the vacuum maps to
//! all modes down. Everything here is the independent tensor-space route
//! used to cross-check the compact index-set operations.
//!
//! Bit convention: mode l (1-based) owns bit n−l of the basis index, so mode
//! 1 is the most significant bit and |l̂⟩ has index 2^(n−l).

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::gksl::{LindbladModel, RATE_FLOOR};
use crate::linalg::{ensure_finite, ensure_square, hermiticity_defect, kron, identity};
use crate::states::{DensityMatrix, IndexSet};
use crate::tolerances::Tolerances;
use crate::{C64, CMatrix};

/// Largest mode register we materialize (dimension 2^12).
pub const MAX_MODES: usize = 12;

/// A density matrix on a register of two-level modes.
///
/// `labels[i]` is the original mode index carried by tensor factor i; a
/// freshly embedded state has labels 1…n, and partial traces keep the
/// surviving labels so reduced states stay addressable.
#[derive(Debug, Clone)]
pub struct TensorState {
    labels: Vec<usize>,
    rho: CMatrix,
}

impl TensorState {
    pub fn new(labels: Vec<usize>, rho: CMatrix, tol: &Tolerances) -> Result<Self> {
        let dim = ensure_square(&rho)?;
        ensure_finite(&rho)?;
        if labels.len() > MAX_MODES {
            return Err(Error::TooManyModes { n: labels.len(), limit: MAX_MODES });
        }
        if dim != 1 << labels.len() {
            return Err(Error::DimensionMismatch { left: dim, right: 1 << labels.len() });
        }
        let defect = hermiticity_defect(&rho);
        if defect > tol.herm {
            return Err(Error::InvalidState(format!(
                "tensor state Hermiticity defect {defect:.3e}"
            )));
        }
        Ok(Self { labels, rho })
    }

    pub fn n_modes(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.rho
    }

    /// Basis index of |l̂⟩ for factor position `pos` (1-based); 0 is |0̂⟩.
    pub fn basis_index(n_modes: usize, pos: usize) -> usize {
        if pos == 0 {
            0
        } else {
            1 << (n_modes - pos)
        }
    }

    /// Weight outside the span of {|0̂⟩, |1̂⟩, …, |n̂⟩} in Frobenius norm.
    pub fn sector_leakage(&self) -> f64 {
        let n = self.n_modes();
        let sector: Vec<usize> = (0..=n).map(|l| Self::basis_index(n, l)).collect();
        let mut in_sector = vec![false; self.dim()];
        for &i in &sector {
            in_sector[i] = true;
        }
        let mut sum = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !(in_sector[i] && in_sector[j]) {
                    sum += self.rho[[i, j]].norm_sqr();
                }
            }
        }
        sum.sqrt()
    }
}

/// Map an (n+1)-level state (vacuum at index 0) onto n two-level modes.
pub fn embed_one_particle(rho: &DensityMatrix, tol: &Tolerances) -> Result<TensorState> {
    let n = rho.dim() - 1;
    if n > MAX_MODES {
        return Err(Error::TooManyModes { n, limit: MAX_MODES });
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "embedding needs at least one non-vacuum level".into(),
        ));
    }
    let dim = 1usize << n;
    let mut out: CMatrix = Array2::zeros((dim, dim));
    for l in 0..=n {
        for k in 0..=n {
            out[[TensorState::basis_index(n, l), TensorState::basis_index(n, k)]] =
                rho.mat()[[l, k]];
        }
    }
    TensorState::new((1..=n).collect(), out, tol)
}

/// Read the (n+1)-level state back off the one-particle sector.
///
/// The residual weight outside the sector is reported, not renormalized
/// away.
pub struct Unembedded {
    pub rho: CMatrix,
    pub leakage: f64,
}

pub fn unembed(state: &TensorState) -> Unembedded {
    let n = state.n_modes();
    let mut rho: CMatrix = Array2::zeros((n + 1, n + 1));
    for l in 0..=n {
        for k in 0..=n {
            rho[[l, k]] = state.mat()[[
                TensorState::basis_index(n, l),
                TensorState::basis_index(n, k),
            ]];
        }
    }
    Unembedded { rho, leakage: state.sector_leakage() }
}

/// Lowering operator σ acting on factor `pos` (1-based) of an n-mode
/// register.
pub fn lowering_operator(n_modes: usize, pos: usize) -> Result<CMatrix> {
    if pos == 0 || pos > n_modes {
        return Err(Error::IndexOutOfRange { index: pos, dim: n_modes + 1 });
    }
    if n_modes > MAX_MODES {
        return Err(Error::TooManyModes { n: n_modes, limit: MAX_MODES });
    }
    let mut sigma: CMatrix = Array2::zeros((2, 2));
    sigma[[0, 1]] = C64::new(1.0, 0.0);
    let mut out = identity(1);
    for i in 1..=n_modes {
        let factor = if i == pos { &sigma } else { &identity(2) };
        out = kron(&out, factor);
    }
    Ok(out)
}

/// Second-quantized GKSL model on 2^n dimensions: Hamiltonian
/// Σ_{lk} H_{lk} σ_l† σ_k and jumps √γ_l σ_l.
///
/// `h_sys` is the n×n Hamiltonian block on the non-vacuum levels.
pub fn second_quantized_model(
    h_sys: &CMatrix,
    gammas: &[f64],
    tol: &Tolerances,
) -> Result<LindbladModel> {
    let n = ensure_square(h_sys)?;
    if n > MAX_MODES {
        return Err(Error::TooManyModes { n, limit: MAX_MODES });
    }
    if gammas.len() != n {
        return Err(Error::DimensionMismatch { left: gammas.len(), right: n });
    }
    if gammas.iter().any(|&g| !g.is_finite() || g < 0.0) {
        return Err(Error::InvalidParameter("decay rates must be non-negative".into()));
    }
    let dim = 1usize << n;
    let sigmas: Vec<CMatrix> = (1..=n)
        .map(|pos| lowering_operator(n, pos))
        .collect::<Result<_>>()?;
    let raisings: Vec<CMatrix> = sigmas.iter().map(crate::linalg::adjoint).collect();

    let mut h: CMatrix = Array2::zeros((dim, dim));
    for l in 0..n {
        for k in 0..n {
            let coeff = h_sys[[l, k]];
            if coeff.norm() == 0.0 {
                continue;
            }
            h = h + raisings[l].dot(&sigmas[k]).mapv(|z| z * coeff);
        }
    }
    let jumps: Vec<CMatrix> = gammas
        .iter()
        .zip(sigmas.iter())
        .filter(|(&g, _)| g >= RATE_FLOOR)
        .map(|(&g, s)| s.mapv(|z| z * g.sqrt()))
        .collect();
    LindbladModel::new(h, jumps, tol)
}

/// Generic partial trace over the tensor factors at 1-based positions `set`.
pub fn partial_trace_tensor(
    state: &TensorState,
    set: &IndexSet,
    tol: &Tolerances,
) -> Result<TensorState> {
    let n = state.n_modes();
    if let Some(maxi) = set.max() {
        if maxi > n {
            return Err(Error::IndexOutOfRange { index: maxi, dim: n + 1 });
        }
    }
    let kept: Vec<usize> = (1..=n).filter(|p| !set.contains(*p)).collect();
    let m = kept.len();
    let traced: Vec<usize> = (1..=n).filter(|p| set.contains(*p)).collect();
    let dim_out = 1usize << m;
    let dim_tr = 1usize << traced.len();

    // Bit offsets (from the most significant side) of each factor position.
    let bit_of = |pos: usize| n - pos;
    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0usize;
        for (a, &p) in kept.iter().enumerate() {
            if kept_idx >> (m - 1 - a) & 1 == 1 {
                full |= 1 << bit_of(p);
            }
        }
        for (b, &p) in traced.iter().enumerate() {
            if traced_idx >> (traced.len() - 1 - b) & 1 == 1 {
                full |= 1 << bit_of(p);
            }
        }
        full
    };

    let mut out: CMatrix = Array2::zeros((dim_out, dim_out));
    for a in 0..dim_out {
        for b in 0..dim_out {
            let mut s = C64::new(0.0, 0.0);
            for t in 0..dim_tr {
                s += state.mat()[[compose(a, t), compose(b, t)]];
            }
            out[[a, b]] = s;
        }
    }
    let labels: Vec<usize> = kept.iter().map(|&p| state.labels[p - 1]).collect();
    TensorState::new(labels, out, tol)
}

/// Partial trace of a one-particle-sector state by the closed formula: the
/// reduced matrix keeps the surviving one-particle block and folds the
/// traced populations into the vacuum entry.
pub fn partial_trace_one_particle(
    state: &TensorState,
    set: &IndexSet,
    tol: &Tolerances,
) -> Result<TensorState> {
    let n = state.n_modes();
    if let Some(maxi) = set.max() {
        if maxi > n {
            return Err(Error::IndexOutOfRange { index: maxi, dim: n + 1 });
        }
    }
    let kept: Vec<usize> = (1..=n).filter(|p| !set.contains(*p)).collect();
    let m = kept.len();
    let dim_out = 1usize << m;
    let read = |l: usize, k: usize| state.mat()[[
        TensorState::basis_index(n, l),
        TensorState::basis_index(n, k),
    ]];

    let mut out: CMatrix = Array2::zeros((dim_out, dim_out));
    // Surviving block, vacuum row/column included.
    for (a, &pa) in std::iter::once(&0usize).chain(kept.iter()).enumerate() {
        for (b, &pb) in std::iter::once(&0usize).chain(kept.iter()).enumerate() {
            let new_a = if a == 0 { 0 } else { TensorState::basis_index(m, a) };
            let new_b = if b == 0 { 0 } else { TensorState::basis_index(m, b) };
            out[[new_a, new_b]] = read(pa, pb);
        }
    }
    // Traced populations land on the vacuum.
    let mut absorbed = C64::new(0.0, 0.0);
    for p in set.iter() {
        absorbed += read(p, p);
    }
    out[[0, 0]] += C64::new(absorbed.re, 0.0);

    let labels: Vec<usize> = kept.iter().map(|&p| state.labels[p - 1]).collect();
    TensorState::new(labels, out, tol)
}
