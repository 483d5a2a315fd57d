use num_complex::Complex64;
use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{QlError, Result};

/// An `n`-bit search space with its uniform initial state `|i⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SearchSpace {
    n: u32,
}

impl SearchSpace {
    pub const MAX_BITS: u32 = 1024;

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > Self::MAX_BITS {
            return Err(QlError::range(
                format!("key bits must lie in 1..={}", Self::MAX_BITS),
                n,
            ));
        }
        Ok(SearchSpace { n })
    }

    pub fn bits(self) -> u32 {
        self.n
    }

    pub fn log2_dimension(self) -> f64 {
        self.n as f64
    }

    /// `2^n`; infinite for `n = 1024`.
    pub fn dimension(self) -> f64 {
        (self.n as f64).exp2()
    }

    /// `g = ⟨i|s⟩ = 2^(-n/2)`.
    pub fn overlap(self) -> f64 {
        (-0.5 * self.n as f64).exp2()
    }

    /// `g² = 2^(-n)`; subnormal above n = 1022.
    pub fn overlap_sq(self) -> f64 {
        (-(self.n as f64)).exp2()
    }

    /// `√(1 − g²)`, the weight of `|s⟩` outside `|i⟩`.
    pub fn overlap_complement(self) -> f64 {
        let g = self.overlap();
        ((1.0 - g) * (1.0 + g)).sqrt()
    }

    /// True when `2^(-n)` is no longer a normal double.
    pub fn initial_probability_underflows(self) -> bool {
        !self.overlap_sq().is_normal()
    }
}

/// `H/ħ` restricted to the orthonormal basis `{|i⟩, |s⊥⟩}`, where
/// `|s⟩ = g|i⟩ + √(1−g²)|s⊥⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    pub omega_i: f64,
    pub omega_s: f64,
    g: f64,
    g_perp: f64,
}

/// Builds `ω_i|i⟩⟨i| + ω_s|s⟩⟨s|` (rad/s) in the reduced basis.
pub fn effective_hamiltonian(space: SearchSpace, omega_i: f64, omega_s: f64) -> Result<EffectiveHamiltonian> {
    for (name, w) in [("omega_i", omega_i), ("omega_s", omega_s)] {
        if !(w.is_finite() && w >= 0.0) {
            return Err(QlError::domain(format!("{name} must be finite and non-negative"), w));
        }
    }
    Ok(EffectiveHamiltonian {
        omega_i,
        omega_s,
        g: space.overlap(),
        g_perp: space.overlap_complement(),
    })
}

impl EffectiveHamiltonian {
    /// Real symmetric matrix `[[⟨i|H|i⟩, ⟨i|H|s⊥⟩], [⟨s⊥|H|i⟩, ⟨s⊥|H|s⊥⟩]]`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (g, gp, ws) = (self.g, self.g_perp, self.omega_s);
        let off = ws * g * gp;
        [[self.omega_i + ws * g * g, off], [off, ws * gp * gp]]
    }

    pub fn trace(&self) -> f64 {
        self.omega_i + self.omega_s
    }

    /// Pauli coefficients `(a0, az, ax)` with `H = a0·1 + az·σz + ax·σx`.
    ///
    /// `az` is assembled from the frequencies directly rather than by
    /// differencing matrix entries, which would cancel for large `n`.
    fn pauli(&self) -> (f64, f64, f64) {
        let a0 = 0.5 * (self.omega_i + self.omega_s);
        let az = 0.5 * (self.omega_i - self.omega_s) + self.omega_s * self.g * self.g;
        let ax = self.omega_s * self.g * self.g_perp;
        (a0, az, ax)
    }

    /// `exp(-i H dt)`; `dt` may be negative.
    pub fn propagator(&self, dt: f64) -> [[Complex64; 2]; 2] {
        let (a0, az, ax) = self.pauli();
        let r = az.hypot(ax);
        let (s, c) = (r * dt).sin_cos();
        let (nz, nx) = if r > 0.0 { (az / r, ax / r) } else { (0.0, 0.0) };
        let phase = Complex64::from_polar(1.0, -a0 * dt);
        let i = Complex64::i();
        [
            [phase * (c - i * s * nz), phase * (-i * s * nx)],
            [phase * (-i * s * nx), phase * (c + i * s * nz)],
        ]
    }

    /// Eigenenergies `(E₊, E₋)` in joules.
    pub fn eigenenergies(&self) -> (f64, f64) {
        let omega = 0.5 * (self.omega_i + self.omega_s);
        let delta = 0.5 * (self.omega_i - self.omega_s);
        closed_form_eigenenergies(omega, delta, self.g * self.g)
    }
}

pub(crate) fn closed_form_eigenenergies(omega: f64, delta: f64, g2: f64) -> (f64, f64) {
    let radius = (delta * delta + (omega * omega - delta * delta) * g2).sqrt();
    let plus = omega + radius;
    // ω² − radius² = (ω² − δω²)(1 − g²); avoids cancellation when E₋ → 0.
    let minus = if plus > 0.0 {
        (omega - delta) * (omega + delta) * (1.0 - g2) / plus
    } else {
        0.0
    };
    (HBAR * plus, HBAR * minus)
}

/// `E± = ħω ± ħ√(δω² + (ω² − δω²)/2^n)` for mean frequency `ω` and detuning `δω`.
pub fn eigenenergies(space: SearchSpace, omega: f64, delta_omega: f64) -> Result<(f64, f64)> {
    if !(omega.is_finite() && delta_omega.is_finite()) {
        return Err(QlError::domain(
            "frequencies must be finite",
            format!("{omega}, {delta_omega}"),
        ));
    }
    if delta_omega.abs() > omega {
        return Err(QlError::domain(
            "|delta_omega| must not exceed omega",
            format!("omega={omega}, delta_omega={delta_omega}"),
        ));
    }
    Ok(closed_form_eigenenergies(omega, delta_omega, space.overlap_sq()))
}

/// Instantaneous search observables of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// `|⟨s|ψ⟩|²`
    pub p_s: f64,
    /// `|⟨i|ψ⟩|²`
    pub p_i: f64,
    /// `A = ⟨ψ|s⟩⟨i|ψ⟩`
    pub overlap_product: Complex64,
    /// `arg A`, radians.
    pub alpha_ab: f64,
    pub e_plus: f64,
    pub e_minus: f64,
}

/// State of the search register inside the `{|i⟩, |s⊥⟩}` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveState {
    pub c1: Complex64,
    pub c2: Complex64,
    pub space: SearchSpace,
}

impl EffectiveState {
    /// `|ψ⟩ = |i⟩`.
    pub fn initial(space: SearchSpace) -> Self {
        EffectiveState {
            c1: Complex64::new(1.0, 0.0),
            c2: Complex64::new(0.0, 0.0),
            space,
        }
    }

    /// Amplitudes on `|i⟩` and `|s⊥⟩`; must be normalized to 1e-9.
    pub fn from_amplitudes(space: SearchSpace, c1: Complex64, c2: Complex64) -> Result<Self> {
        let state = EffectiveState { c1, c2, space };
        if state.norm_error() > 1e-9 {
            return Err(QlError::domain("state is not normalized", state.norm_error()));
        }
        Ok(state)
    }

    /// `⟨i|ψ⟩`
    pub fn initial_amplitude(&self) -> Complex64 {
        self.c1
    }

    /// `⟨s|ψ⟩ = g·c1 + √(1−g²)·c2`
    pub fn solution_amplitude(&self) -> Complex64 {
        self.c1 * self.space.overlap() + self.c2 * self.space.overlap_complement()
    }

    pub fn norm_error(&self) -> f64 {
        (self.c1.norm_sqr() + self.c2.norm_sqr() - 1.0).abs()
    }

    pub fn observables(&self, omega_i: f64, omega_s: f64) -> Observables {
        let a_i = self.initial_amplitude();
        let a_s = self.solution_amplitude();
        let product = a_s.conj() * a_i;
        let omega = 0.5 * (omega_i + omega_s);
        let delta = 0.5 * (omega_i - omega_s);
        let (e_plus, e_minus) = closed_form_eigenenergies(omega, delta, self.space.overlap_sq());
        Observables {
            p_s: a_s.norm_sqr(),
            p_i: a_i.norm_sqr(),
            overlap_product: product,
            alpha_ab: product.arg(),
            e_plus,
            e_minus,
        }
    }

    /// Applies a 2×2 unitary.
    pub fn apply(&self, u: &[[Complex64; 2]; 2]) -> Self {
        EffectiveState {
            c1: u[0][0] * self.c1 + u[0][1] * self.c2,
            c2: u[1][0] * self.c1 + u[1][1] * self.c2,
            space: self.space,
        }
    }

    /// Exact evolution for `dt` seconds (possibly negative) under constant `(ω_i, ω_s)`.
    pub fn propagated(&self, omega_i: f64, omega_s: f64, dt: f64) -> Result<Self> {
        let h = effective_hamiltonian(self.space, omega_i, omega_s)?;
        Ok(self.apply(&h.propagator(dt)))
    }
}
