//! Density matrices, trace-deficient states, and index-set partial traces.
//!
//! Basis convention used everywhere in this crate: the absorbing vacuum
//! level sits at row/column 0 and the physical levels occupy indices 1…n.

use std::collections::BTreeSet;
use std::fmt;

use ndarray::Array2;

use crate::eigh::min_eigenvalue;
use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, ensure_square, hermiticity_defect, trace};
use crate::tolerances::Tolerances;
use crate::{C64, CMatrix, CVector};

/// Diagnostics from [`validate_density_matrix`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub dim: usize,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    /// |Tr − 1| for normalized states; callers checking trace-deficient
    /// states use `trace_re` directly.
    pub trace_deviation: f64,
}

impl ValidationReport {
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.hermiticity_defect <= tol.herm
            && self.min_eigenvalue >= -tol.psd
            && self.trace_deviation <= tol.tr
            && self.trace_im.abs() <= tol.tr
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim {}: herm defect {:.3e}, min eig {:.3e}, trace {:.12} + {:.3e}i (dev {:.3e})",
            self.dim,
            self.hermiticity_defect,
            self.min_eigenvalue,
            self.trace_re,
            self.trace_im,
            self.trace_deviation
        )
    }
}

/// Hermiticity, positivity, and trace diagnostics for a candidate density
/// matrix. Always returns a report; use [`ValidationReport::passes`] to turn
/// it into a verdict.
///
/// The eigenvalue check runs on the Hermitian part (ρ + ρ†)/2, so a state
/// carrying 1e−12-level asymmetry from propagation is still diagnosed
/// sensibly.
pub fn validate_density_matrix(rho: &CMatrix, _tol: &Tolerances) -> Result<ValidationReport> {
    let n = ensure_square(rho)?;
    ensure_finite(rho)?;
    let tr = trace(rho);
    Ok(ValidationReport {
        dim: n,
        hermiticity_defect: hermiticity_defect(rho),
        min_eigenvalue: min_eigenvalue(rho)?,
        trace_re: tr.re,
        trace_im: tr.im,
        trace_deviation: (tr.re - 1.0).abs().max(tr.im.abs()),
    })
}

/// A normalized density matrix: Hermitian, positive semidefinite, trace 1.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        let report = validate_density_matrix(&mat, tol)?;
        if !report.passes(tol) {
            return Err(Error::InvalidState(report.to_string()));
        }
        Ok(Self { mat })
    }

    /// |ψ⟩⟨ψ| from a normalized vector.
    pub fn from_pure(psi: &CVector, tol: &Tolerances) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > tol.tr {
            return Err(Error::InvalidState(format!(
                "pure state norm² = {norm2}, expected 1"
            )));
        }
        let mat = crate::linalg::outer(psi, psi);
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_inner(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> C64 {
        trace(&self.mat)
    }
}

/// A non-normalized density matrix: Hermitian, positive semidefinite,
/// 0 ≤ Tr ≤ 1. The trace deficit records probability that has decayed away.
#[derive(Debug, Clone)]
pub struct NonNormalizedDensityMatrix {
    mat: CMatrix,
}

impl NonNormalizedDensityMatrix {
    pub fn new(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        let n = ensure_square(&mat)?;
        ensure_finite(&mat)?;
        let defect = hermiticity_defect(&mat);
        if defect > tol.herm {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:.3e} exceeds {:.3e}",
                tol.herm
            )));
        }
        let min_eig = min_eigenvalue(&mat)?;
        if min_eig < -tol.psd {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min_eig:.3e} below -{:.3e}",
                tol.psd
            )));
        }
        let tr = trace(&mat);
        if tr.im.abs() > tol.tr {
            return Err(Error::InvalidState(format!(
                "trace has imaginary part {:.3e}",
                tr.im
            )));
        }
        if tr.re > 1.0 + tol.tr {
            return Err(Error::InvalidState(format!(
                "trace {:.12} exceeds 1 (dim {n})",
                tr.re
            )));
        }
        if tr.re < -tol.tr {
            return Err(Error::InvalidState(format!("trace {:.12} is negative", tr.re)));
        }
        Ok(Self { mat })
    }

    pub fn from_pure(psi: &CVector, tol: &Tolerances) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 > 1.0 + tol.tr {
            return Err(Error::InvalidState(format!(
                "pure state norm² = {norm2} exceeds 1"
            )));
        }
        Ok(Self { mat: crate::linalg::outer(psi, psi) })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        trace(&self.mat)
    }
}

/// Embed a trace-deficient state into one dimension more, assigning the
/// trace deficit to the vacuum level at index 0:
///
/// ρ = R ⊕ 0 + (1 − Tr R)|0⟩⟨0|
///
/// The original indices shift up by one and the output trace is 1 by
/// construction (the deficit is computed, never renormalized away).
pub fn normalization_reconstruction(r: &NonNormalizedDensityMatrix) -> DensityMatrix {
    let n = r.dim();
    let mut rho: CMatrix = Array2::zeros((n + 1, n + 1));
    for i in 0..n {
        for j in 0..n {
            rho[[i + 1, j + 1]] = r.mat[[i, j]];
        }
    }
    let deficit = C64::new(1.0, 0.0) - trace(&r.mat);
    rho[[0, 0]] = C64::new(deficit.re, 0.0);
    DensityMatrix { mat: rho }
}

/// A set of level indices, never containing the vacuum index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    indices: BTreeSet<usize>,
}

impl IndexSet {
    pub fn new<I: IntoIterator<Item = usize>>(iter: I) -> Result<Self> {
        let indices: BTreeSet<usize> = iter.into_iter().collect();
        if indices.contains(&0) {
            return Err(Error::VacuumIndexTraced);
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self { indices: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.indices.iter().next_back().copied()
    }
}

/// Result of [`partial_trace_over_indices`]: the reduced state together with
/// the re-indexing map (new index → old index; entry 0 is always the
/// vacuum).
#[derive(Debug, Clone)]
pub struct ReducedState {
    pub rho: DensityMatrix,
    pub kept: Vec<usize>,
}

/// Trace out a set of level indices from an (n+1)-dimensional state.
///
/// The traced populations are absorbed into the vacuum entry, the surviving
/// block (vacuum coherences included) is re-indexed onto {0} ∪ Ī, and the
/// total trace is preserved.
pub fn partial_trace_over_indices(
    rho: &DensityMatrix,
    set: &IndexSet,
    tol: &Tolerances,
) -> Result<ReducedState> {
    let dim = rho.dim();
    if let Some(maxi) = set.max() {
        if maxi >= dim {
            return Err(Error::IndexOutOfRange { index: maxi, dim });
        }
    }
    let kept: Vec<usize> = (0..dim).filter(|i| !set.contains(*i)).collect();
    let m = kept.len();
    let mut out: CMatrix = Array2::zeros((m, m));
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate() {
            out[[a, b]] = rho.mat[[i, j]];
        }
    }
    let mut absorbed = C64::new(0.0, 0.0);
    for l in set.iter() {
        absorbed += rho.mat[[l, l]];
    }
    out[[0, 0]] += C64::new(absorbed.re, 0.0);

    Ok(ReducedState {
        rho: DensityMatrix::new(out, tol)?,
        kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn validate_maximally_mixed_passes() {
        let rho = Array2::from_diag_elem(2, c(0.5, 0.0));
        let report = validate_density_matrix(&rho, &tol()).unwrap();
        assert!(report.passes(&tol()));
    }

    #[test]
    fn validate_flags_negative_eigenvalue() {
        let rho = array![[c(1.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.5, 0.0)]];
        let report = validate_density_matrix(&rho, &tol()).unwrap();
        assert!(!report.passes(&tol()));
        assert!((report.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(report.trace_deviation < 1e-12);
    }

    #[test]
    fn reconstruction_half_excited() {
        let r = NonNormalizedDensityMatrix::new(array![[c(0.5, 0.0)]], &tol()).unwrap();
        let rho = normalization_reconstruction(&r);
        assert_eq!(rho.dim(), 2);
        assert!((rho.mat()[[0, 0]] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((rho.mat()[[1, 1]] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((rho.trace() - c(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn reconstruction_of_zero_is_vacuum() {
        let r = NonNormalizedDensityMatrix::new(Array2::zeros((3, 3)), &tol()).unwrap();
        let rho = normalization_reconstruction(&r);
        assert_eq!(rho.dim(), 4);
        assert!((rho.mat()[[0, 0]] - c(1.0, 0.0)).norm() < 1e-15);
        for i in 1..4 {
            assert_eq!(rho.mat()[[i, i]], c(0.0, 0.0));
        }
    }

    #[test]
    fn reconstruction_of_normalized_state_has_empty_vacuum() {
        let r = NonNormalizedDensityMatrix::new(
            array![
                [c(0.5, 0.0), c(0.1, 0.2)],
                [c(0.1, -0.2), c(0.5, 0.0)]
            ],
            &tol(),
        )
        .unwrap();
        let rho = normalization_reconstruction(&r);
        assert_eq!(rho.mat()[[0, 0]], c(0.0, 0.0));
        assert_eq!(rho.mat()[[1, 2]], c(0.1, 0.2));
    }

    #[test]
    fn reconstruction_rejects_overfull_trace() {
        let m = Array2::from_diag_elem(2, c(0.6, 0.0));
        assert!(NonNormalizedDensityMatrix::new(m, &tol()).is_err());
    }

    #[test]
    fn index_set_rejects_vacuum() {
        assert!(IndexSet::new([0usize]).is_err());
        assert!(IndexSet::new([1usize, 3]).is_ok());
    }

    #[test]
    fn partial_trace_populations_fold_into_vacuum() {
        let rho = DensityMatrix::new(
            Array2::from_diag(&ndarray::arr1(&[c(0.2, 0.0), c(0.3, 0.0), c(0.5, 0.0)])),
            &tol(),
        )
        .unwrap();
        let set = IndexSet::new([2usize]).unwrap();
        let reduced = partial_trace_over_indices(&rho, &set, &tol()).unwrap();
        assert_eq!(reduced.rho.dim(), 2);
        assert!((reduced.rho.mat()[[0, 0]] - c(0.7, 0.0)).norm() < 1e-15);
        assert!((reduced.rho.mat()[[1, 1]] - c(0.3, 0.0)).norm() < 1e-15);
        assert_eq!(reduced.kept, vec![0, 1]);
    }

    #[test]
    fn partial_trace_empty_set_is_identity_map() {
        let rho = DensityMatrix::new(
            array![
                [c(0.4, 0.0), c(0.1, 0.1)],
                [c(0.1, -0.1), c(0.6, 0.0)]
            ],
            &tol(),
        )
        .unwrap();
        let reduced = partial_trace_over_indices(&rho, &IndexSet::empty(), &tol()).unwrap();
        assert_eq!(crate::linalg::max_abs_diff(reduced.rho.mat(), rho.mat()), 0.0);
    }

    #[test]
    fn partial_trace_keeps_vacuum_coherences() {
        // Coherence between |0⟩ and |1⟩ must survive tracing index 2.
        let rho = DensityMatrix::new(
            array![
                [c(0.3, 0.0), c(0.2, 0.05), c(0.0, 0.0)],
                [c(0.2, -0.05), c(0.5, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), c(0.0, 0.0), c(0.2, 0.0)]
            ],
            &tol(),
        )
        .unwrap();
        let set = IndexSet::new([2usize]).unwrap();
        let reduced = partial_trace_over_indices(&rho, &set, &tol()).unwrap();
        assert!((reduced.rho.mat()[[0, 1]] - c(0.2, 0.05)).norm() < 1e-15);
        assert!((reduced.rho.mat()[[0, 0]] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_out_of_range() {
        let rho = DensityMatrix::new(Array2::from_diag_elem(2, c(0.5, 0.0)), &tol()).unwrap();
        let set = IndexSet::new([5usize]).unwrap();
        assert!(matches!(
            partial_trace_over_indices(&rho, &set, &tol()),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
