//! Adaptive Simpson quadrature for complex-valued integrands.
//!
//! Used by the spectral-density ↔ memory-kernel cross-checks; transparent on
//! purpose rather than fast.

use crate::C64;

/// ∫_a^b f(x) dx to absolute tolerance `abs_tol`.
pub fn integrate_adaptive<F>(f: &F, a: f64, b: f64, abs_tol: f64) -> C64
where
    F: Fn(f64) -> C64,
{
    integrate_adaptive_resolved(f, a, b, abs_tol, 0)
}

/// Adaptive Simpson with a forced minimum bisection depth. The error
/// estimator compares two coarse samplings and can false-converge on an
/// integrand whose features (a narrow peak in a wide window, many
/// oscillation periods) fall between the first sample points; forcing the
/// first `min_depth` bisections guarantees the features are seen before any
/// acceptance decision.
pub fn integrate_adaptive_resolved<F>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    min_depth: u32,
) -> C64
where
    F: Fn(f64) -> C64,
{
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, abs_tol, 60, min_depth)
}

fn simpson(a: f64, b: f64, fa: C64, fm: C64, fb: C64) -> C64 {
    (fa + 4.0 * fm + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: C64,
    fm: C64,
    fb: C64,
    whole: C64,
    tol: f64,
    depth: usize,
    min_depth: u32,
) -> C64
where
    F: Fn(f64) -> C64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || (min_depth == 0 && delta.norm() <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    let next_min = min_depth.saturating_sub(1);
    recurse(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1, next_min)
        + recurse(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1, next_min)
}
