use crate::error::{QlError, Result};

/// `b(k, n) = (1 + k)/(1 + √(k² + 2^-n(1 − k²)))²` for relative detuning `k = δω/ω`.
pub fn prefactor_b(k: f64, n: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(QlError::domain("relative detuning k must lie in [0, 1]", k));
    }
    if !(n >= 0.0) {
        return Err(QlError::domain("n must be non-negative", n));
    }
    let g2 = (-n).exp2();
    let root = (k * k + g2 * (1.0 - k * k)).sqrt();
    Ok((1.0 + k) / ((1.0 + root) * (1.0 + root)))
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

/// Maximizer of [`prefactor_b`] over `k`.
///
/// Searches `[0, 1e-2]`, widened to ten times `1/√(3·2^n)` (at most 1) for
/// small `n` where the peak lies beyond `1e-2`. Tolerance `1e-14`.
pub fn optimal_k(n: f64) -> Result<f64> {
    if !(n >= 0.0) {
        return Err(QlError::domain("n must be non-negative", n));
    }
    let estimate = 1.0 / (3.0 * n.exp2()).sqrt();
    let hi = (10.0 * estimate).clamp(1e-2, 1.0);
    let f = |k: f64| prefactor_b(k, n).unwrap_or(f64::NEG_INFINITY);
    Ok(golden_section_max(f, 0.0, hi, 1e-14))
}
