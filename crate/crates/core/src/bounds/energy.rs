use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{H, HBAR, K_B};
use crate::error::{QlError, Result};

/// `k_B T ln 2`, the minimum work to reset one bit at temperature `T`.
pub fn landauer_energy(temperature: f64) -> f64 {
    K_B * temperature * LN_2
}

/// `h/(4δt)`, the minimum mean energy to reach an orthogonal state in `δt`.
pub fn margolus_levitin_energy(orthogonalization_time: f64) -> Result<f64> {
    if !(orthogonalization_time > 0.0) {
        return Err(QlError::domain(
            "orthogonalization time must be positive",
            orthogonalization_time,
        ));
    }
    Ok(H / (4.0 * orthogonalization_time))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ReadoutMode {
    /// Key register plus result register: `2n` resets.
    Generic,
    /// Plaintext, ciphertext and key registers: `4n` resets.
    KnownPlaintext,
}

/// Landauer cost of preparing and reading out the search registers.
pub fn init_readout_work(n: f64, temperature: f64, mode: ReadoutMode) -> Result<f64> {
    if !(n >= 0.0 && temperature >= 0.0) {
        return Err(QlError::domain(
            "n and temperature must be non-negative",
            format!("n={n}, T={temperature}"),
        ));
    }
    let bits = match mode {
        ReadoutMode::Generic => 2.0 * n,
        ReadoutMode::KnownPlaintext => 4.0 * n,
    };
    Ok(bits * landauer_energy(temperature))
}

/// Relative energy spread `ΔE/⟨E⟩` of a battery with `dof` quadratic degrees
/// of freedom in a canonical ensemble, storing `potential_energy` on top of
/// its thermal energy `dof·k_B T/2`.
pub fn battery_relative_uncertainty(dof: u64, temperature: f64, potential_energy: f64) -> Result<f64> {
    if dof == 0 {
        return Err(QlError::domain("need at least one degree of freedom", dof));
    }
    if !(temperature > 0.0) {
        return Err(QlError::domain("temperature must be positive", temperature));
    }
    if !(potential_energy >= 0.0) {
        return Err(QlError::domain(
            "potential energy must be non-negative",
            potential_energy,
        ));
    }
    let n = dof as f64;
    let kt = K_B * temperature;
    let spread = (0.5 * n).sqrt() * kt;
    Ok(spread / (potential_energy + 0.5 * n * kt))
}

/// `ħ(Σ_j |a_j|² ω_j^m)^(1/m)`, the work the m-th energy moment pins down.
///
/// Evaluated as a log-sum-exp so that `m` in the hundreds does not
/// overflow. As `m → ∞` it tends to `ħ·max{|ω_j| : a_j ≠ 0}`.
pub fn work_floor(spectrum: &[f64], overlaps: &[Complex64], m: u32) -> Result<f64> {
    if spectrum.len() != overlaps.len() {
        return Err(QlError::domain(
            "spectrum and overlaps must have the same length",
            format!("{} vs {}", spectrum.len(), overlaps.len()),
        ));
    }
    if m == 0 || m % 2 == 1 {
        return Err(QlError::domain("moment order must be a positive even integer", m));
    }
    if let Some(bad) = spectrum.iter().find(|w| !w.is_finite()) {
        return Err(QlError::domain("spectrum must be finite", bad));
    }
    let total: f64 = overlaps.iter().map(|a| a.norm_sqr()).sum();
    if total == 0.0 {
        return Err(QlError::domain("all overlaps are zero", 0));
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(QlError::domain("overlaps must be normalized", total));
    }
    let m = m as f64;
    let logs: Vec<f64> = spectrum
        .iter()
        .zip(overlaps)
        .filter(|(w, a)| a.norm_sqr() > 0.0 && **w != 0.0)
        .map(|(w, a)| a.norm_sqr().ln() + m * w.abs().ln())
        .collect();
    let Some(peak) = logs.iter().copied().reduce(f64::max) else {
        return Ok(0.0);
    };
    let sum: f64 = logs.iter().map(|l| (l - peak).exp()).sum();
    Ok(HBAR * ((peak + sum.ln()) / m).exp())
}
