//! Small dense-matrix helpers shared by every module.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{C64, CMatrix, CVector};

/// Conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

/// Hermitian part (a + a†)/2.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + &adjoint(a)).mapv(|z| z * 0.5)
}

/// max_ij |a_ij − b_ij|
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// max_ij |a_ij|
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// max_ij |a_ij − a†_ij|, the Hermiticity defect.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut d = 0.0f64;
    for i in 0..n {
        for j in i..n {
            d = d.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    d
}

/// Frobenius norm.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// 1-norm (maximum absolute column sum), used for exponential scaling.
pub fn one_norm(a: &CMatrix) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diag().sum()
}

pub fn identity(n: usize) -> CMatrix {
    Array2::from_diag_elem(n, C64::new(1.0, 0.0))
}

/// |v⟩⟨w|
pub fn outer(v: &CVector, w: &CVector) -> CMatrix {
    let n = v.len();
    let m = w.len();
    let mut out = Array2::zeros((n, m));
    for i in 0..n {
        for j in 0..m {
            out[[i, j]] = v[i] * w[j].conj();
        }
    }
    out
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[[i, j]];
            for k in 0..rb {
                for l in 0..cb {
                    out[[i * rb + k, j * cb + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Check that every entry is finite.
pub fn ensure_finite(a: &CMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("matrix has non-finite entries".into()))
    }
}

pub fn ensure_square(a: &CMatrix) -> Result<usize> {
    let (r, c) = a.dim();
    if r != c {
        return Err(Error::NotSquare { rows: r, cols: c });
    }
    if r == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    Ok(r)
}

/// Row-major vectorization: `vec(ρ)[i·n + j] = ρ[i, j]`.
pub fn vectorize(a: &CMatrix) -> CVector {
    let n = a.nrows();
    Array1::from_iter(a.iter().copied()).into_shape_with_order(n * n).unwrap()
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    Array2::from_shape_vec((n, n), v.to_vec()).unwrap()
}

/// Wire format for complex matrices: row-major `[re, im]` pairs.
///
/// ```json
/// { "dim": 2, "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]] }
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(a: &CMatrix) -> Self {
        Self {
            dim: a.nrows(),
            entries: a.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for dim {}, got {}",
                self.dim * self.dim,
                self.dim,
                self.entries.len()
            )));
        }
        let data: Vec<C64> = self.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let m = Array2::from_shape_vec((self.dim, self.dim), data).unwrap();
        ensure_finite(&m)?;
        Ok(m)
    }
}
