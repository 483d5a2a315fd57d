//! Simulation experiments that measure quantities the closed forms only estimate.

use num_complex::Complex64;
use serde::Serialize;

use super::evolve::{evolve, propagate};
use super::schedule::{
    adiabatic_schedule, grover_pulsed_schedule, modulated_detuning_schedule, AdiabaticKind, ControlSchedule, Segment,
};
use super::space::{EffectiveState, SearchSpace};
use crate::constants::HBAR;
use crate::error::{QlError, Result};

/// State reached by constant `ω_i = ω_s = ω` at the time where `P_s = 1/2`.
pub fn mid_ballistic_state(space: SearchSpace, omega: f64) -> Result<EffectiveState> {
    let g = space.overlap_sq();
    // P_s(t) = g² + (1 − g²) sin²(ωgt) = 1/2.
    let angle = ((0.5 - g) / (1.0 - g)).sqrt().asin();
    let t = angle / (omega * space.overlap());
    EffectiveState::initial(space).propagated(omega, omega, t)
}

/// Fitted `κ` in `dα_ab/dt ≈ κ·δω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseVelocityFit {
    pub delta_omega: f64,
    pub slope_radps: f64,
    pub coefficient: f64,
}

/// Measures the phase velocity of `α_ab` under constant detuning, starting
/// from the mid-ballistic state where `|A|` is maximal.
///
/// The slope is a least-squares fit of the unwrapped phase over
/// `samples` points spanning a quarter of a phase turn.
pub fn phase_velocity_coefficient(
    space: SearchSpace,
    omega: f64,
    delta_omega: f64,
    samples: usize,
) -> Result<PhaseVelocityFit> {
    if delta_omega == 0.0 || delta_omega.abs() > omega {
        return Err(QlError::domain("need 0 < |delta_omega| <= omega", delta_omega));
    }
    if samples < 3 {
        return Err(QlError::domain("need at least 3 samples", samples));
    }
    let psi0 = mid_ballistic_state(space, omega)?;
    let (wi, ws) = (omega + delta_omega, omega - delta_omega);
    let span = 0.25 * std::f64::consts::PI / delta_omega.abs();
    let mut ts = Vec::with_capacity(samples);
    let mut phases = Vec::with_capacity(samples);
    let mut last = 0.0f64;
    let mut offset = 0.0;
    for k in 0..samples {
        let t = span * k as f64 / (samples - 1) as f64;
        let alpha = psi0.propagated(wi, ws, t)?.observables(wi, ws).alpha_ab;
        if k > 0 {
            let jump = alpha + offset - last;
            if jump > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
            } else if jump < -std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
            }
        }
        last = alpha + offset;
        ts.push(t);
        phases.push(last);
    }
    let slope = least_squares_slope(&ts, &phases);
    Ok(PhaseVelocityFit {
        delta_omega,
        slope_radps: slope,
        coefficient: slope / delta_omega,
    })
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// First local maximum of `P_s` over whole Grover iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverPeak {
    pub pulse_phase: f64,
    pub iterations: u32,
    pub p_s: f64,
}

/// Applies oracle/diffusion pulse pairs of the given phase one at a time
/// and reports the iteration count at which `P_s` first stops increasing.
pub fn grover_first_peak(space: SearchSpace, pulse_phase: f64, max_iterations: u32) -> Result<GroverPeak> {
    let energy = HBAR;
    let pair = grover_pulsed_schedule(space, energy, pulse_phase, 1)?;
    let mut psi = EffectiveState::initial(space);
    let mut best = GroverPeak {
        pulse_phase,
        iterations: 0,
        p_s: space.overlap_sq(),
    };
    for k in 1..=max_iterations {
        psi = propagate(&psi, &pair)?;
        let p_s = psi.solution_amplitude().norm_sqr();
        if p_s < best.p_s {
            return Ok(best);
        }
        best = GroverPeak {
            pulse_phase,
            iterations: k,
            p_s,
        };
    }
    Err(QlError::range(
        "no maximum of P_s within the iteration limit",
        max_iterations,
    ))
}

/// Outcome of running an adiabatic sweep to completion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticRun {
    pub bits: u32,
    pub runtime_s: f64,
    /// First sampled time with `1 − P_s ≤ ε²`, if any.
    pub time_to_target_s: Option<f64>,
    pub final_p_s: f64,
}

/// Runs [`adiabatic_schedule`] and records when the infidelity first drops
/// to `error_budget²`, sampling `samples_per_segment` times per segment.
pub fn adiabatic_run(
    space: SearchSpace,
    energy_scale: f64,
    error_budget: f64,
    kind: AdiabaticKind,
    segments: usize,
    samples_per_segment: usize,
) -> Result<AdiabaticRun> {
    let schedule = adiabatic_schedule(space, energy_scale, error_budget, kind, segments)?;
    let runtime = schedule.total_duration();
    let step = runtime / (segments * samples_per_segment.max(1)) as f64;
    let trace = evolve(&EffectiveState::initial(space), &schedule, step)?;
    let target = error_budget * error_budget;
    let time_to_target = trace
        .points
        .iter()
        .find(|p| 1.0 - p.observables.p_s <= target)
        .map(|p| p.t);
    Ok(AdiabaticRun {
        bits: space.bits(),
        runtime_s: runtime,
        time_to_target_s: time_to_target,
        final_p_s: trace.last().observables.p_s,
    })
}

/// Measured effect of a sinusoidal detuning on the time-averaged overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulationMeasurement {
    pub ratio: f64,
    /// `|⟨A⟩| / |A0|` over whole modulation periods.
    pub measured: f64,
    /// Same quantity with the detuning switched off.
    pub unmodulated: f64,
}

/// Starts from the mid-ballistic state and drives `δω(t) = r·ω_c·sin(ω_c t)`
/// for `periods` periods, averaging `A` by the trapezoid rule on the
/// segment grid.
pub fn measure_modulated_suppression(
    space: SearchSpace,
    omega: f64,
    modulation_frequency: f64,
    ratio: f64,
    periods: u32,
    per_period: u32,
) -> Result<ModulationMeasurement> {
    let psi0 = mid_ballistic_state(space, omega)?;
    let a0 = psi0.solution_amplitude().conj() * psi0.initial_amplitude();
    let amplitude = ratio * modulation_frequency;
    let modulated = modulated_detuning_schedule(omega, amplitude, modulation_frequency, periods, per_period)?;
    let flat = ControlSchedule::new(
        modulated
            .segments()
            .iter()
            .map(|s| Segment::new(s.duration, omega, omega))
            .collect(),
    )?;
    let mean = |schedule: &ControlSchedule| -> Result<Complex64> {
        let mut psi = psi0;
        let mut prev = a0;
        let mut acc = Complex64::new(0.0, 0.0);
        for seg in schedule.segments() {
            psi = psi.propagated(seg.omega_i, seg.omega_s, seg.duration)?;
            let a = psi.solution_amplitude().conj() * psi.initial_amplitude();
            acc += 0.5 * (prev + a) * seg.duration;
            prev = a;
        }
        Ok(acc / schedule.total_duration())
    };
    Ok(ModulationMeasurement {
        ratio,
        measured: mean(&modulated)?.norm() / a0.norm(),
        unmodulated: mean(&flat)?.norm() / a0.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn mid_ballistic_is_half_way() {
        let space = SearchSpace::new(12).unwrap();
        let psi = mid_ballistic_state(space, 2.0).unwrap();
        assert!((psi.solution_amplitude().norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phase_velocity_is_proportional_to_detuning() {
        let space = SearchSpace::new(16).unwrap();
        let a = phase_velocity_coefficient(space, 1.0, 0.1, 41).unwrap();
        let b = phase_velocity_coefficient(space, 1.0, 0.2, 41).unwrap();
        assert!((a.coefficient - b.coefficient).abs() < 0.05 * a.coefficient.abs());
        assert!(a.slope_radps.signum() == -a.delta_omega.signum());
    }

    #[test]
    fn standard_grover_peak() {
        let space = SearchSpace::new(8).unwrap();
        let peak = grover_first_peak(space, PI, 100).unwrap();
        assert_eq!(peak.iterations, 12);
        assert!(peak.p_s > 0.99);
    }

    #[test]
    fn modulation_barely_changes_the_average() {
        let space = SearchSpace::new(16).unwrap();
        let m = measure_modulated_suppression(space, 1.0, 0.5, 0.1, 1, 256).unwrap();
        assert!(m.unmodulated > 0.99);
        assert!((m.measured / 0.9975 - 1.0).abs() < 0.1, "{m:?}");
    }
}
