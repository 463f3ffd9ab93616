//! Dense complex matrix exponential via scaling-and-squaring with
//! order-adaptive Padé approximants (orders 3/5/7/9/13), following Higham's
//! 2005 analysis, plus the partial-pivot LU solve it needs.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, ensure_square, identity, one_norm};
use crate::{C64, CMatrix};

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// exp(A) for a square complex matrix.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;

    if n == 1 {
        let mut out = Array2::zeros((1, 1));
        out[[0, 0]] = a[[0, 0]].exp();
        return Ok(out);
    }

    let norm = one_norm(a);
    if norm == 0.0 {
        return Ok(identity(n));
    }

    let (scaled, s): (CMatrix, u32) = if norm <= THETA_13 {
        (a.clone(), 0)
    } else {
        let s = (norm / THETA_13).log2().ceil() as u32;
        let factor = c(1.0 / (2f64.powi(s as i32)));
        (a.mapv(|z| z * factor), s)
    };
    let norm_scaled = if s == 0 { norm } else { one_norm(&scaled) };

    let (u, v) = if norm_scaled <= THETA_3 {
        pade_low(&scaled, &B3)
    } else if norm_scaled <= THETA_5 {
        pade_low(&scaled, &B5)
    } else if norm_scaled <= THETA_7 {
        pade_low(&scaled, &B7)
    } else if norm_scaled <= THETA_9 {
        pade_low(&scaled, &B9)
    } else {
        pade13(&scaled)
    };

    // exp(A) ≈ (V − U)⁻¹ (V + U)
    let num = &v + &u;
    let den = &v - &u;
    let mut result = LuFactors::factor(den)?.solve(&num)?;

    for _ in 0..s {
        result = result.dot(&result);
    }
    Ok(result)
}

/// U and V for the diagonal Padé approximant with coefficient table `b`
/// (orders 3, 5, 7, 9). `b.len()` is the order plus one.
fn pade_low(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let eye = identity(n);
    let mut powers: Vec<CMatrix> = vec![eye.clone()];
    let a2 = a.dot(a);
    powers.push(a2.clone());
    let half = b.len() / 2; // number of even powers needed: I, A², …, A^(m−1)
    while powers.len() < half {
        let next = powers.last().unwrap().dot(&a2);
        powers.push(next);
    }

    let mut u_sum: CMatrix = Array2::zeros((n, n));
    let mut v: CMatrix = Array2::zeros((n, n));
    for (k, p) in powers.iter().enumerate() {
        u_sum = u_sum + p * c(b[2 * k + 1]);
        v = v + p * c(b[2 * k]);
    }
    (a.dot(&u_sum), v)
}

/// The order-13 evaluation with the factored polynomial scheme.
fn pade13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let eye = identity(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let w1 = &a6 * c(B13[13]) + &a4 * c(B13[11]) + &a2 * c(B13[9]);
    let w2 = w1.dot(&a6)
        + &a6 * c(B13[7])
        + &a4 * c(B13[5])
        + &a2 * c(B13[3])
        + &eye * c(B13[1]);
    let u = a.dot(&w2);

    let z1 = &a6 * c(B13[12]) + &a4 * c(B13[10]) + &a2 * c(B13[8]);
    let v = z1.dot(&a6)
        + &a6 * c(B13[6])
        + &a4 * c(B13[4])
        + &a2 * c(B13[2])
        + &eye * c(B13[0]);
    (u, v)
}

/// Partial-pivot LU factorization of a square complex matrix. The
/// elimination and substitution loops run on contiguous row slices.
pub struct LuFactors {
    n: usize,
    lu: Vec<C64>,
    pivots: Vec<usize>,
    sign: f64,
}

impl LuFactors {
    pub fn factor(a: CMatrix) -> Result<Self> {
        let n = ensure_square(&a)?;
        let mut lu: Vec<C64> = a.iter().copied().collect();
        let mut pivots = vec![0usize; n];
        let mut sign = 1.0;
        for k in 0..n {
            let mut max_val = 0.0;
            let mut max_row = k;
            for i in k..n {
                let v = lu[i * n + k].norm();
                if v > max_val {
                    max_val = v;
                    max_row = i;
                }
            }
            if max_val == 0.0 {
                return Err(Error::SingularMatrix);
            }
            pivots[k] = max_row;
            if max_row != k {
                sign = -sign;
                for j in 0..n {
                    lu.swap(k * n + j, max_row * n + j);
                }
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                let (upper, lower) = lu.split_at_mut(i * n);
                let row_k = &upper[k * n + k + 1..k * n + n];
                let row_i = &mut lower[k + 1..n];
                for (xij, xkj) in row_i.iter_mut().zip(row_k.iter()) {
                    *xij -= factor * xkj;
                }
            }
        }
        Ok(Self { n, lu, pivots, sign })
    }

    /// Solve `A X = B` for a matrix right-hand side.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix> {
        let n = self.n;
        if b.nrows() != n {
            return Err(Error::DimensionMismatch { left: n, right: b.nrows() });
        }
        let m = b.ncols();
        let mut x: Vec<C64> = b.iter().copied().collect();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                for j in 0..m {
                    x.swap(k * m + j, p * m + j);
                }
            }
        }
        // Forward substitution with the unit lower triangle.
        for k in 0..n {
            for i in k + 1..n {
                let factor = self.lu[i * n + k];
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                let (upper, lower) = x.split_at_mut(i * m);
                let row_k = &upper[k * m..k * m + m];
                let row_i = &mut lower[..m];
                for (xij, xkj) in row_i.iter_mut().zip(row_k.iter()) {
                    *xij -= factor * xkj;
                }
            }
        }
        // Back substitution.
        for k in (0..n).rev() {
            let pivot = self.lu[k * n + k];
            for v in &mut x[k * m..k * m + m] {
                *v /= pivot;
            }
            for i in 0..k {
                let factor = self.lu[i * n + k];
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                let (upper, lower) = x.split_at_mut(k * m);
                let row_i = &mut upper[i * m..i * m + m];
                let row_k = &lower[..m];
                for (xij, xkj) in row_i.iter_mut().zip(row_k.iter()) {
                    *xij -= factor * xkj;
                }
            }
        }
        Ok(Array2::from_shape_vec((n, m), x).unwrap())
    }

    pub fn det(&self) -> C64 {
        let mut d = c(self.sign);
        for k in 0..self.n {
            d *= self.lu[k * self.n + k];
        }
        d
    }
}

/// Determinant via LU; zero for singular input.
pub fn det(a: &CMatrix) -> C64 {
    match LuFactors::factor(a.clone()) {
        Ok(f) => f.det(),
        Err(_) => c(0.0),
    }
}
