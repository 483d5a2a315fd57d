//! Base-2 log-domain helpers for quantities like `2^n` with `n` in the thousands.

/// `log2(2^a + 2^b)`.
pub fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// `log2(2^y - 1)` for `y >= 0`; `-inf` at `y == 0`.
pub fn log2_pow2_minus_one(y: f64) -> f64 {
    debug_assert!(y >= 0.0);
    if y == 0.0 {
        return f64::NEG_INFINITY;
    }
    if y < 1.0 {
        // 2^y - 1 = expm1(y ln 2)
        return (y * std::f64::consts::LN_2).exp_m1().log2();
    }
    y + (-(-y).exp2()).ln_1p() / std::f64::consts::LN_2
}

/// `log2(x^2 + 1)` without overflow for huge `x`.
pub fn log2_square_plus_one(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        return (x * x).ln_1p() / std::f64::consts::LN_2;
    }
    2.0 * x.log2() + (1.0 / (x * x)).ln_1p() / std::f64::consts::LN_2
}

/// Bisection for the root of a non-decreasing function on `[lo, hi]`.
///
/// Requires `f(lo) <= 0 <= f(hi)`; stops when the bracket is narrower than
/// `rel_tol * max(|lo|, |hi|, 1e-300)`.
pub fn bisect_increasing(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * lo.abs().max(hi.abs()).max(1e-300) || mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
