//! Dense Hermitian eigensolver.
//!
//! Householder reduction to real symmetric tridiagonal form followed by the
//! implicit-shift QL iteration, with the unitary transform accumulated so
//! eigenvectors come out in the original basis. Eigenvalues are returned in
//! ascending order.
//!
//! The hot loops run on contiguous row slices; the accumulated transform is
//! kept row-transposed during QL so the plane rotations touch adjacent
//! memory. Matrices up to ~10³ decompose in seconds, which covers the
//! discretized-bath oracles.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, ensure_square};
use crate::{C64, CMatrix};

/// Eigendecomposition of a Hermitian matrix: `a = V diag(values) V†`.
///
/// `vectors` holds the orthonormal eigenvectors as columns, matching the
/// order of `values`.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

const ZERO: C64 = C64::new(0.0, 0.0);

/// Eigendecomposition of a Hermitian matrix.
///
/// The strictly lower triangle and the Hermitian mirror of the upper
/// triangle are both read; callers should pass a matrix that is Hermitian to
/// working precision (use `(a + a†)/2` first if it came out of a propagator).
pub fn eigh(a: &CMatrix) -> Result<Eigh> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;

    if n == 1 {
        return Ok(Eigh {
            values: vec![a[[0, 0]].re],
            vectors: Array2::from_diag_elem(1, C64::new(1.0, 0.0)),
        });
    }

    // Row-major working copies addressed as flat slices.
    let mut work: Vec<C64> = a.iter().copied().collect();
    // Transform accumulated row-transposed: qt row i is column i of Q.
    let mut qt: Vec<C64> = vec![ZERO; n * n];
    for i in 0..n {
        qt[i * n + i] = C64::new(1.0, 0.0);
    }
    let mut v: Vec<C64> = vec![ZERO; n];
    let mut w: Vec<C64> = vec![ZERO; n];
    let mut p: Vec<C64> = vec![ZERO; n];

    // Householder reduction to Hermitian tridiagonal form.
    for k in 0..n - 2 {
        let m = n - k - 1;
        let mut norm_sq = 0.0f64;
        for i in k + 1..n {
            norm_sq += work[i * n + k].norm_sqr();
        }
        if norm_sq == 0.0 {
            continue;
        }
        let norm_x = norm_sq.sqrt();
        let alpha = work[(k + 1) * n + k];
        let phase = if alpha.norm() > 0.0 {
            alpha / alpha.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let beta = -phase * norm_x;

        for i in 0..m {
            v[i] = work[(k + 1 + i) * n + k];
        }
        v[0] -= beta;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // p = τ A v on the trailing block, then the rank-2 Hermitian update
        // A ← A − v w† − w v† with w = p − (τ v†p / 2) v.
        for i in 0..m {
            let row = &work[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            let mut acc = ZERO;
            for (aij, vj) in row.iter().zip(v[..m].iter()) {
                acc += aij * vj;
            }
            p[i] = acc * tau;
        }
        let vp: C64 = v[..m].iter().zip(p[..m].iter()).map(|(vi, pi)| vi.conj() * pi).sum();
        let kappa = 0.5 * tau * vp.re;
        for i in 0..m {
            w[i] = p[i] - kappa * v[i];
        }
        for i in 0..m {
            let vi = v[i];
            let wi = w[i];
            let row = &mut work[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for ((aij, vj), wj) in row.iter_mut().zip(v[..m].iter()).zip(w[..m].iter()) {
                *aij -= vi * wj.conj() + wi * vj.conj();
            }
        }

        work[(k + 1) * n + k] = beta;
        work[k * n + k + 1] = beta.conj();
        for i in k + 2..n {
            work[i * n + k] = ZERO;
            work[k * n + i] = ZERO;
        }

        // Q ← Q (I − τ v v†). On the transposed storage this is a rank-1
        // update of the trailing rows: qtᵀ rows j ← rows j − τ v_j* (Σ_j v_j qt_j).
        let mut acc_row = vec![ZERO; n];
        for j in 0..m {
            let vj = v[j];
            if vj == ZERO {
                continue;
            }
            let row = &qt[(k + 1 + j) * n..(k + 2 + j) * n];
            for (acc, q) in acc_row.iter_mut().zip(row.iter()) {
                *acc += vj * q;
            }
        }
        for j in 0..m {
            let factor = tau * v[j].conj();
            if factor == ZERO {
                continue;
            }
            let row = &mut qt[(k + 1 + j) * n..(k + 2 + j) * n];
            for (q, acc) in row.iter_mut().zip(acc_row.iter()) {
                *q -= factor * acc;
            }
        }
    }

    // Strip the remaining phases off the sub-diagonal so QL can run in real
    // arithmetic. With U = diag(u), U A U† has sub-diagonal |c_k| and the
    // basis change folds into Q as Q ← Q U†.
    let mut d: Vec<f64> = (0..n).map(|i| work[i * n + i].re).collect();
    let mut e: Vec<f64> = vec![0.0; n];
    let mut u = vec![C64::new(1.0, 0.0); n];
    for k in 0..n - 1 {
        let c = work[(k + 1) * n + k];
        let r = c.norm();
        e[k] = r;
        u[k + 1] = if r > 0.0 { u[k] * (c.conj() / r) } else { u[k] };
    }
    for i in 0..n {
        let ui = u[i].conj();
        if ui == C64::new(1.0, 0.0) {
            continue;
        }
        for q in &mut qt[i * n..(i + 1) * n] {
            *q *= ui;
        }
    }

    ql_implicit(&mut d, &mut e, &mut qt, n)?;

    // Ascending order; transpose back to column-eigenvector layout.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors: CMatrix = Array2::zeros((n, n));
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[[r, new]] = qt[old * n + r];
        }
    }

    Ok(Eigh { values, vectors })
}

/// Eigenvalues only (same algorithm; the transform is still accumulated,
/// dimensions here are small enough that this does not matter).
pub fn eigvalsh(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.values)
}

/// Smallest eigenvalue of the Hermitian part `(a + a†)/2`.
pub fn min_eigenvalue(a: &CMatrix) -> Result<f64> {
    let h = crate::linalg::hermitian_part(a);
    Ok(eigh(&h)?.values[0])
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, rotating the
/// rows of the transposed transform `qt` along.
///
/// `d` is the diagonal, `e[i]` the sub-diagonal element between rows `i` and
/// `i+1` (`e[n-1]` is workspace).
fn ql_implicit(d: &mut [f64], e: &mut [f64], qt: &mut [C64], n: usize) -> Result<()> {
    let eps = f64::EPSILON;
    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }

        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > 50 {
                    return Err(Error::NoConvergence(l));
                }

                // Wilkinson-style implicit shift.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gg = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gg;
                    d[i + 1] = h + s * (c * gg + s * d[i]);

                    // Rotate rows i and i+1 of the transposed transform.
                    let (head, tail) = qt.split_at_mut((i + 1) * n);
                    let row_i = &mut head[i * n..(i + 1) * n];
                    let row_i1 = &mut tail[..n];
                    for (zi, zi1) in row_i.iter_mut().zip(row_i1.iter_mut()) {
                        let hk = *zi1;
                        *zi1 = s * *zi + c * hk;
                        *zi = c * *zi - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
