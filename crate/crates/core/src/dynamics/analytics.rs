use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::space::{Observables, SearchSpace};
use crate::error::{QlError, Result};

/// Closed-form `(dP_s/dt, dA/dt)` for the instantaneous state.
///
/// `dP_s/dt = 2ω_i·2^(-n/2)·Im A` and
/// `dA/dt = −iδω(2A − 2^(-n/2)(P_i + P_s)) + iω·2^(-n/2)(P_i − P_s)`.
pub fn analytic_rates(obs: &Observables, omega_i: f64, omega_s: f64, space: SearchSpace) -> (f64, Complex64) {
    let g = space.overlap();
    let a = obs.overlap_product;
    let omega = 0.5 * (omega_i + omega_s);
    let delta = 0.5 * (omega_i - omega_s);
    let dps = 2.0 * omega_i * g * a.im;
    let i = Complex64::i();
    let da = -i * delta * (2.0 * a - g * (obs.p_i + obs.p_s)) + i * omega * g * (obs.p_i - obs.p_s);
    (dps, da)
}

/// Mean of `A` over a window `Δt` with the populations frozen at
/// `P_i + P_s = 1` and `P_i − P_s = mean_population`.
///
/// `⟨A⟩ = A0·E + A_eq(1 − E)` with `θ = δω·Δt`, `E = e^{−iθ} sin θ/θ` and
/// `A_eq = g(1 + ω⟨P_i−P_s⟩/δω)/2`. The `1/δω` in `A_eq` is folded into
/// `(1 − E)/θ`, which is expanded in a series near `θ = 0`.
pub fn averaged_overlap(
    a0: Complex64,
    delta_omega: f64,
    omega: f64,
    mean_population: f64,
    window: f64,
    space: SearchSpace,
) -> Result<Complex64> {
    if !(window.is_finite() && window > 0.0) {
        return Err(QlError::domain("averaging window must be positive", window));
    }
    let g = space.overlap();
    let theta = delta_omega * window;
    let (e, f) = if theta.abs() < 1e-3 {
        let t2 = theta * theta;
        let e = Complex64::new(1.0 - 2.0 * t2 / 3.0 + 2.0 * t2 * t2 / 15.0, -theta + theta * t2 / 3.0);
        let f = Complex64::new(
            2.0 * theta / 3.0 - 2.0 * theta * t2 / 15.0,
            1.0 - t2 / 3.0 + 2.0 * t2 * t2 / 45.0,
        );
        (e, f)
    } else {
        let e = Complex64::from_polar(theta.sin() / theta, -theta);
        (e, (1.0 - e) / theta)
    };
    let driven = 0.5 * g * omega * mean_population * window;
    Ok(a0 * e + 0.5 * g * (1.0 - e) + driven * f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetuningRegime {
    /// Close to `|i⟩` or `|s⟩`.
    Boundary,
    /// Mid-run, with `A` nearly imaginary.
    Bulk,
}

/// Estimated optimal constant detuning as `δω_o·Δt/2`, for `C = ωΔt/2`.
///
/// `Boundary` gives `3/C`; `Bulk` gives
/// `3/C − Re(A0 − 2^(-n/2)) / (√(P_i P_s) + C⟨P_i−P_s⟩/2^(n/2))`, clamped to at most `4/C`.
pub fn optimal_detuning(
    a0: Complex64,
    c: f64,
    mean_population: f64,
    p_i: f64,
    p_s: f64,
    space: SearchSpace,
    regime: DetuningRegime,
) -> Result<f64> {
    let sqrt_dim = (0.5 * space.bits() as f64).exp2();
    if !(c >= 10.0) {
        return Err(QlError::domain("requires C >= 10", c));
    }
    if !(c <= sqrt_dim / 10.0) {
        return Err(QlError::domain("requires C <= 2^(n/2)/10", c));
    }
    match regime {
        DetuningRegime::Boundary => Ok(3.0 / c),
        DetuningRegime::Bulk => {
            let g = space.overlap();
            if !(p_i >= 4.0 * c * c * space.overlap_sq()) {
                return Err(QlError::domain("bulk regime requires P_i >= 4C^2/2^n", p_i));
            }
            let denom = (p_i * p_s).sqrt() + c * mean_population * g;
            let value = 3.0 / c - (a0.re - g) / denom;
            Ok(value.min(4.0 / c))
        }
    }
}

/// `1 − r²/4` for modulation ratio `r = |δω_o/ω_c|` in `[0, 0.5]`.
pub fn modulated_detuning_suppression(r: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&r) {
        return Err(QlError::domain("modulation ratio must lie in [0, 0.5]", r));
    }
    Ok(1.0 - 0.25 * r * r)
}
