use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::space::SearchSpace;
use crate::constants::HBAR;
use crate::error::{QlError, Result};

/// One piece of a piecewise-constant control sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(rename = "duration_s")]
    pub duration: f64,
    #[serde(rename = "omega_i_radps")]
    pub omega_i: f64,
    #[serde(rename = "omega_s_radps")]
    pub omega_s: f64,
}

impl Segment {
    pub fn new(duration: f64, omega_i: f64, omega_s: f64) -> Self {
        Segment {
            duration,
            omega_i,
            omega_s,
        }
    }

    /// `ω = (ω_i + ω_s)/2`
    pub fn mean_frequency(&self) -> f64 {
        0.5 * (self.omega_i + self.omega_s)
    }

    /// `δω = (ω_i − ω_s)/2`
    pub fn detuning(&self) -> f64 {
        0.5 * (self.omega_i - self.omega_s)
    }
}

/// Piecewise-constant `(ω_i(t), ω_s(t))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchedule")]
pub struct ControlSchedule {
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
struct RawSchedule {
    segments: Vec<Segment>,
}

impl TryFrom<RawSchedule> for ControlSchedule {
    type Error = QlError;

    fn try_from(raw: RawSchedule) -> Result<Self> {
        ControlSchedule::new(raw.segments)
    }
}

impl ControlSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(QlError::domain("schedule has no segments", "[]"));
        }
        for (k, s) in segments.iter().enumerate() {
            if !(s.duration.is_finite() && s.duration > 0.0) {
                return Err(QlError::domain(
                    format!("segment {k}: duration must be positive"),
                    s.duration,
                ));
            }
            for w in [s.omega_i, s.omega_s] {
                if !(w.is_finite() && w >= 0.0) {
                    return Err(QlError::domain(
                        format!("segment {k}: frequencies must be finite and non-negative"),
                        w,
                    ));
                }
            }
        }
        Ok(ControlSchedule { segments })
    }

    /// Like [`ControlSchedule::new`], also checking the total against `runtime`.
    pub fn with_runtime(segments: Vec<Segment>, runtime: f64) -> Result<Self> {
        let schedule = Self::new(segments)?;
        let total = schedule.total_duration();
        if (total - runtime).abs() > 1e-12 * runtime.abs() {
            return Err(QlError::domain(
                format!("segment durations sum to {total:e} s, declared runtime is {runtime:e} s"),
                runtime,
            ));
        }
        Ok(schedule)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Control bandwidth implied by the fastest switching in the schedule.
    ///
    /// The averaging window is the shortest segment; a constant schedule
    /// (one segment) demands no control bandwidth.
    pub fn control_bandwidth(&self) -> f64 {
        let total = self.total_duration();
        if self.segments.len() == 1 {
            return control_bandwidth(total, total).unwrap_or(0.0);
        }
        let window = self.segments.iter().map(|s| s.duration).fold(f64::INFINITY, f64::min);
        control_bandwidth(total, window).unwrap_or(0.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QlError::Parse {
            token: "schedule".into(),
            reason: e.to_string(),
        })
    }
}

/// `max(3.79/window − 3.79/total, 0)` in rad/s.
pub fn control_bandwidth(total_time: f64, window: f64) -> Result<f64> {
    if !(window > 0.0 && window <= total_time * (1.0 + 1e-12)) {
        return Err(QlError::domain(
            "window must satisfy 0 < window <= total time",
            format!("window={window}, total={total_time}"),
        ));
    }
    const HWHM: f64 = 3.79;
    Ok((HWHM / window - HWHM / total_time).max(0.0))
}

/// Mean frequency the ballistic protocol can afford with `work` joules:
/// `ω = W / (ħ(1 + 2^(-n/2)))`.
pub fn ballistic_frequency(space: SearchSpace, work: f64) -> f64 {
    work / (HBAR * (1.0 + space.overlap()))
}

/// Constant `ω_i = ω_s = ω` for the time `t_F = π√(2^n)/(2ω)` that takes `|i⟩` to `|s⟩`.
pub fn ballistic_schedule(space: SearchSpace, work: f64) -> Result<ControlSchedule> {
    if !(work.is_finite() && work > 0.0) {
        return Err(QlError::domain("work must be positive", work));
    }
    let omega = ballistic_frequency(space, work);
    let t_final = PI / (2.0 * omega * space.overlap());
    ControlSchedule::with_runtime(vec![Segment::new(t_final, omega, omega)], t_final)
}

/// Ballistic evolution stopped after `duration` seconds.
pub fn ballistic_schedule_for(space: SearchSpace, work: f64, duration: f64) -> Result<ControlSchedule> {
    if !(work.is_finite() && work > 0.0) {
        return Err(QlError::domain("work must be positive", work));
    }
    let omega = ballistic_frequency(space, work);
    ControlSchedule::with_runtime(vec![Segment::new(duration, omega, omega)], duration)
}

/// Alternating oracle `(0, E/ħ)` and diffusion `(E/ħ, 0)` pulses of
/// length `ħ·phase/E`, `iterations` pairs in total.
pub fn grover_pulsed_schedule(
    _space: SearchSpace,
    pulse_energy: f64,
    pulse_phase: f64,
    iterations: u32,
) -> Result<ControlSchedule> {
    if !(pulse_energy.is_finite() && pulse_energy > 0.0) {
        return Err(QlError::domain("pulse energy must be positive", pulse_energy));
    }
    if !(pulse_phase > 0.0 && pulse_phase <= 2.0 * PI) {
        return Err(QlError::domain("pulse phase must lie in (0, 2π]", pulse_phase));
    }
    if iterations == 0 {
        return Err(QlError::domain("at least one iteration is required", 0));
    }
    let omega = pulse_energy / HBAR;
    let dt = HBAR * pulse_phase / pulse_energy;
    let segments = (0..iterations)
        .flat_map(|_| [Segment::new(dt, 0.0, omega), Segment::new(dt, omega, 0.0)])
        .collect();
    ControlSchedule::with_runtime(segments, dt * 2.0 * iterations as f64)
}

/// Iteration count of the textbook oracle-phase-π schedule, `round(π·2^(n/2)/4)`.
pub fn grover_iterations(space: SearchSpace) -> u32 {
    (PI * (0.5 * space.bits() as f64).exp2() / 4.0).round() as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdiabaticKind {
    Linear,
    Local,
}

/// Gap between the two levels of `E[(1−c)|i⟩⟨i| + c|s⟩⟨s|]` relative to `E`:
/// `√(1 − 4c(1−c)(1 − 2^(-n)))`.
pub fn adiabatic_gap(space: SearchSpace, c: f64) -> f64 {
    (1.0 - 4.0 * c * (1.0 - c) * (1.0 - space.overlap_sq())).sqrt()
}

/// Closed-form local-adiabatic clock `τ(c) = ∫₀ᶜ dc'/gap(c')²`.
struct LocalClock {
    a: f64,
    q: f64,
}

impl LocalClock {
    fn new(space: SearchSpace) -> Self {
        let a = space.overlap_sq();
        LocalClock { a, q: 1.0 - a }
    }

    fn tau(&self, c: f64) -> f64 {
        let k = (self.q / self.a).sqrt();
        (((2.0 * c - 1.0) * k).atan() + k.atan()) / (2.0 * (self.a * self.q).sqrt())
    }

    fn c_at(&self, tau: f64) -> f64 {
        let k = (self.q / self.a).sqrt();
        let u = (2.0 * (self.a * self.q).sqrt() * tau - k.atan()).tan() / k;
        (0.5 * (1.0 + u)).clamp(0.0, 1.0)
    }
}

/// Total runtime of the local-adiabatic sweep with pacing
/// `dc/dt = ε·gap(c)²·E/ħ`.
pub fn local_adiabatic_runtime(space: SearchSpace, energy_scale: f64, error_budget: f64) -> f64 {
    HBAR * LocalClock::new(space).tau(1.0) / (error_budget * energy_scale)
}

/// Discretized sweep `(ħω_i, ħω_s) = ((1−c)E, cE)` from `c = 0` to `c = 1`.
///
/// Both kinds share the runtime of the local schedule for the given
/// `error_budget`; `Linear` spaces `c` uniformly, `Local` spaces it so each
/// segment spends equal time in the local-adiabatic clock. Each segment
/// holds the Hamiltonian at its midpoint.
pub fn adiabatic_schedule(
    space: SearchSpace,
    energy_scale: f64,
    error_budget: f64,
    kind: AdiabaticKind,
    segments: usize,
) -> Result<ControlSchedule> {
    if !(energy_scale.is_finite() && energy_scale > 0.0) {
        return Err(QlError::domain("energy scale must be positive", energy_scale));
    }
    if !(error_budget > 0.0 && error_budget < 1.0) {
        return Err(QlError::domain("error budget must lie in (0, 1)", error_budget));
    }
    if segments < 256 {
        return Err(QlError::domain(
            "adiabatic schedules need at least 256 segments",
            segments,
        ));
    }
    let clock = LocalClock::new(space);
    let runtime = local_adiabatic_runtime(space, energy_scale, error_budget);
    let dt = runtime / segments as f64;
    let tau_end = clock.tau(1.0);
    let omega = energy_scale / HBAR;
    let list = (0..segments)
        .map(|k| {
            let mid = (k as f64 + 0.5) / segments as f64;
            let c = match kind {
                AdiabaticKind::Linear => mid,
                AdiabaticKind::Local => clock.c_at(mid * tau_end),
            };
            Segment::new(dt, (1.0 - c) * omega, c * omega)
        })
        .collect();
    ControlSchedule::with_runtime(list, runtime)
}

/// Constant mean frequency with detuning `δω(t) = δω₀·sin(ω_c t)` over
/// `periods` modulation periods, `per_period` segments each.
pub fn modulated_detuning_schedule(
    omega: f64,
    detuning_amplitude: f64,
    modulation_frequency: f64,
    periods: u32,
    per_period: u32,
) -> Result<ControlSchedule> {
    if detuning_amplitude.abs() > omega {
        return Err(QlError::domain(
            "detuning amplitude must not exceed omega",
            detuning_amplitude,
        ));
    }
    if per_period < 64 {
        return Err(QlError::domain(
            "need at least 64 segments per modulation period",
            per_period,
        ));
    }
    if !(modulation_frequency > 0.0) || periods == 0 {
        return Err(QlError::domain(
            "modulation must have positive frequency and period count",
            modulation_frequency,
        ));
    }
    let period = 2.0 * PI / modulation_frequency;
    let dt = period / per_period as f64;
    let count = periods * per_period;
    let segments = (0..count)
        .map(|k| {
            // Segment average of sin over [t_k, t_k + dt].
            let t0 = k as f64 * dt;
            let mean_sin = ((modulation_frequency * t0).cos() - (modulation_frequency * (t0 + dt)).cos())
                / (modulation_frequency * dt);
            let delta = detuning_amplitude * mean_sin;
            Segment::new(dt, omega + delta, omega - delta)
        })
        .collect();
    ControlSchedule::with_runtime(segments, period * periods as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ballistic_small_case() {
        let space = SearchSpace::new(2).unwrap();
        let s = ballistic_schedule(space, HBAR * 1.5).unwrap();
        let seg = s.segments()[0];
        assert_relative_eq!(seg.omega_i, 1.0, max_relative = 1e-14);
        assert_eq!(seg.omega_i, seg.omega_s);
        assert_relative_eq!(s.total_duration(), PI, max_relative = 1e-14);
        assert_eq!(s.control_bandwidth(), 0.0);
    }

    #[test]
    fn ballistic_128_bits_within_a_nanosecond() {
        let space = SearchSpace::new(128).unwrap();
        let t = ballistic_schedule(space, 6.5e-6).unwrap().total_duration();
        assert!(t <= 1e-9, "{t}");
        // t_F <= 1 ns iff W >= (π/2)(2^64 + 1)ħ / 1 ns.
        let threshold = 0.5 * PI * (64f64.exp2() + 1.0) * HBAR / 1e-9;
        assert_relative_eq!(threshold, 3.06e-6, max_relative = 2e-3);
        let at = ballistic_schedule(space, threshold).unwrap().total_duration();
        assert_relative_eq!(at, 1e-9, max_relative = 1e-12);
    }

    #[test]
    fn grover_schedule_layout() {
        let space = SearchSpace::new(8).unwrap();
        assert_eq!(grover_iterations(space), 13);
        let e = 2.0 * HBAR;
        let s = grover_pulsed_schedule(space, e, PI, 13).unwrap();
        assert_eq!(s.segments().len(), 26);
        assert_eq!(s.segments()[0], Segment::new(PI / 2.0, 0.0, 2.0));
        assert_eq!(s.segments()[1], Segment::new(PI / 2.0, 2.0, 0.0));
        assert!(grover_pulsed_schedule(space, e, 7.0, 1).is_err());
        assert!(grover_pulsed_schedule(space, e, PI, 0).is_err());
    }

    #[test]
    fn local_clock_inverts_and_matches_quadrature() {
        let space = SearchSpace::new(10).unwrap();
        let clock = LocalClock::new(space);
        for c in [0.0, 0.1, 0.5, 0.77, 1.0] {
            assert!((clock.c_at(clock.tau(c)) - c).abs() < 1e-9, "{c}");
        }
        // Simpson quadrature of 1/gap² as an independent check.
        let m = 200_000;
        let h = 1.0 / m as f64;
        let f = |c: f64| 1.0 / adiabatic_gap(space, c).powi(2);
        let mut acc = f(0.0) + f(1.0);
        for k in 1..m {
            acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        assert_relative_eq!(clock.tau(1.0), acc * h / 3.0, max_relative = 1e-6);
    }

    #[test]
    fn adiabatic_schedule_shape() {
        let space = SearchSpace::new(8).unwrap();
        let e = HBAR;
        for kind in [AdiabaticKind::Linear, AdiabaticKind::Local] {
            let s = adiabatic_schedule(space, e, 0.1, kind, 256).unwrap();
            assert_eq!(s.segments().len(), 256);
            assert_relative_eq!(
                s.total_duration(),
                local_adiabatic_runtime(space, e, 0.1),
                max_relative = 1e-12
            );
            for seg in s.segments() {
                assert_relative_eq!(seg.omega_i + seg.omega_s, 1.0, max_relative = 1e-12);
            }
            let first = s.segments()[0];
            assert!(first.omega_i > first.omega_s);
        }
        assert!(adiabatic_schedule(space, e, 1.0, AdiabaticKind::Local, 256).is_err());
        assert!(adiabatic_schedule(space, e, 0.1, AdiabaticKind::Local, 100).is_err());
    }

    #[test]
    fn bandwidth_arithmetic() {
        assert_eq!(control_bandwidth(10.0, 10.0).unwrap(), 0.0);
        assert_relative_eq!(control_bandwidth(10.0, 5.0).unwrap(), 3.79 / 10.0, max_relative = 1e-15);
        assert!(control_bandwidth(10.0, 0.0).is_err());
        assert!(control_bandwidth(10.0, 11.0).is_err());
    }

    #[test]
    fn schedule_validation_and_json() {
        assert!(ControlSchedule::new(vec![]).is_err());
        assert!(ControlSchedule::new(vec![Segment::new(0.0, 1.0, 1.0)]).is_err());
        assert!(ControlSchedule::new(vec![Segment::new(1.0, -1.0, 1.0)]).is_err());
        assert!(ControlSchedule::with_runtime(vec![Segment::new(1.0, 1.0, 1.0)], 2.0).is_err());
        let s = ControlSchedule::new(vec![Segment::new(0.5, 1.0, 2.0), Segment::new(0.25, 0.0, 3.0)]).unwrap();
        let text = s.to_json();
        assert!(text.contains("\"duration_s\""));
        assert!(text.contains("\"omega_i_radps\""));
        assert_eq!(ControlSchedule::from_json(&text).unwrap(), s);
        assert!(ControlSchedule::from_json(r#"{"segments":[]}"#).is_err());
    }
}
