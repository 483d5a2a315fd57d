use num_complex::Complex64;
use serde_json::{json, Value};

use super::schedule::ControlSchedule;
use super::space::{effective_hamiltonian, EffectiveState, Observables};
use crate::error::{QlError, Result};
use crate::numfmt::fmt17;

/// Largest tolerated deviation of `|c1|² + |c2|²` from one.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Column header of the CSV trace format.
pub const TRACE_CSV_HEADER: &str = "t_s,omega_i,omega_s,P_s,P_i,re_A,im_A,alpha_ab,norm_error";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    pub omega_i: f64,
    pub omega_s: f64,
    pub observables: Observables,
    pub norm_error: f64,
}

/// Time series of observables.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub points: Vec<TracePoint>,
    /// Set when `2^(-n)` is not a normal double, so `P_s` near the start
    /// reads as (close to) zero rather than its true tiny value.
    pub underflow: bool,
}

impl Trace {
    pub fn last(&self) -> &TracePoint {
        self.points.last().expect("traces are never empty")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(200 * (self.points.len() + 1));
        out.push_str(TRACE_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let o = &p.observables;
            let row = [
                p.t,
                p.omega_i,
                p.omega_s,
                o.p_s,
                o.p_i,
                o.overlap_product.re,
                o.overlap_product.im,
                o.alpha_ab,
                p.norm_error,
            ];
            let cells: Vec<String> = row.iter().map(|&x| fmt17(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON array with one object per sample, keyed like the CSV header.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.points
                .iter()
                .map(|p| {
                    let o = &p.observables;
                    json!({
                        "t_s": p.t,
                        "omega_i": p.omega_i,
                        "omega_s": p.omega_s,
                        "P_s": o.p_s,
                        "P_i": o.p_i,
                        "re_A": o.overlap_product.re,
                        "im_A": o.overlap_product.im,
                        "alpha_ab": o.alpha_ab,
                        "norm_error": p.norm_error,
                    })
                })
                .collect(),
        )
    }
}

/// Sample instants: multiples of `step`, every segment boundary, and the end.
///
/// Grid points closer than `1e-12·T` to a boundary are merged into it. Each
/// entry carries the index of the segment whose Hamiltonian applies there
/// (the segment that ends at a boundary, so `t = 0` maps to segment 0).
pub(crate) fn sample_times(schedule: &ControlSchedule, step: f64) -> Result<Vec<(f64, usize)>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(QlError::domain("sample step must be positive", step));
    }
    let total = schedule.total_duration();
    let count = (total / step).floor();
    if count > 5e7 {
        return Err(QlError::Capacity {
            message: format!("{count} samples requested; increase the sample step"),
        });
    }
    let merge = 1e-12 * total;
    let mut out = vec![(0.0, 0)];
    let mut start = 0.0;
    let mut k = 1u64;
    for (idx, seg) in schedule.segments().iter().enumerate() {
        let end = start + seg.duration;
        loop {
            let t = k as f64 * step;
            if t >= end - merge {
                break;
            }
            if t > out.last().unwrap().0 + merge {
                out.push((t, idx));
            }
            k += 1;
        }
        out.push((end, idx));
        start = end;
    }
    Ok(out)
}

/// Integrates `state` through `schedule`, sampling every `sample_step`
/// seconds and at every segment boundary.
///
/// Each sample is reached by the exact propagator from its segment start,
/// so there is no step-size error anywhere.
pub fn evolve(state: &EffectiveState, schedule: &ControlSchedule, sample_step: f64) -> Result<Trace> {
    let times = sample_times(schedule, sample_step)?;
    let segments = schedule.segments();
    let mut points = Vec::with_capacity(times.len());
    let mut seg_state = *state;
    let mut seg_index = 0;
    let mut seg_start = 0.0;
    let mut h = effective_hamiltonian(state.space, segments[0].omega_i, segments[0].omega_s)?;
    for (t, idx) in times {
        while seg_index < idx {
            let seg = segments[seg_index];
            seg_state = seg_state.apply(&h.propagator(seg.duration));
            seg_start += seg.duration;
            seg_index += 1;
            let next = segments[seg_index];
            h = effective_hamiltonian(state.space, next.omega_i, next.omega_s)?;
        }
        let tau = (t - seg_start).max(0.0);
        let psi = seg_state.apply(&h.propagator(tau));
        let norm_error = psi.norm_error();
        if norm_error > NORM_TOLERANCE {
            return Err(QlError::NormDrift {
                drift: norm_error,
                time: t,
            });
        }
        let seg = segments[idx];
        points.push(TracePoint {
            t,
            omega_i: seg.omega_i,
            omega_s: seg.omega_s,
            observables: psi.observables(seg.omega_i, seg.omega_s),
            norm_error,
        });
    }
    Ok(Trace {
        points,
        underflow: state.space.initial_probability_underflows(),
    })
}

/// Final state after the whole schedule, without sampling.
pub fn propagate(state: &EffectiveState, schedule: &ControlSchedule) -> Result<EffectiveState> {
    let mut psi = *state;
    for seg in schedule.segments() {
        let h = effective_hamiltonian(state.space, seg.omega_i, seg.omega_s)?;
        psi = psi.apply(&h.propagator(seg.duration));
    }
    if psi.norm_error() > NORM_TOLERANCE {
        return Err(QlError::NormDrift {
            drift: psi.norm_error(),
            time: schedule.total_duration(),
        });
    }
    Ok(psi)
}

/// `A = ⟨ψ|s⟩⟨i|ψ⟩` of a state.
pub fn overlap_product(state: &EffectiveState) -> Complex64 {
    state.solution_amplitude().conj() * state.initial_amplitude()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;
    use crate::dynamics::schedule::{ballistic_schedule, Segment};
    use crate::dynamics::space::SearchSpace;

    #[test]
    fn zero_schedule_leaves_state_alone() {
        let space = SearchSpace::new(5).unwrap();
        let s = ControlSchedule::new(vec![Segment::new(3.0, 0.0, 0.0)]).unwrap();
        let trace = evolve(&EffectiveState::initial(space), &s, 0.1).unwrap();
        assert_eq!(trace.last().t, 3.0);
        for p in &trace.points {
            assert!((p.observables.p_s - 1.0 / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn samples_include_boundaries_and_increase() {
        let s = ControlSchedule::new(vec![
            Segment::new(0.25, 1.0, 0.0),
            Segment::new(0.3, 0.0, 1.0),
            Segment::new(0.45, 2.0, 2.0),
        ])
        .unwrap();
        let times = sample_times(&s, 0.1).unwrap();
        let ts: Vec<f64> = times.iter().map(|x| x.0).collect();
        for w in ts.windows(2) {
            assert!(w[1] > w[0]);
        }
        for b in [0.25, 0.55, 1.0] {
            assert!(ts.iter().any(|&t| (t - b).abs() < 1e-15), "{b}");
        }
        assert_eq!(*ts.last().unwrap(), s.total_duration());
        assert!(sample_times(&s, 0.0).is_err());
    }

    #[test]
    fn ballistic_follows_sine_law() {
        let space = SearchSpace::new(12).unwrap();
        let work = HBAR * 1000.0 * (1.0 + space.overlap());
        let s = ballistic_schedule(space, work).unwrap();
        let t_f = s.total_duration();
        let trace = evolve(&EffectiveState::initial(space), &s, t_f / 500.0).unwrap();
        let g2 = space.overlap_sq();
        for p in &trace.points {
            let expected = g2 + (1.0 - g2) * (1000.0 * p.t * space.overlap()).sin().powi(2);
            assert!((p.observables.p_s - expected).abs() < 1e-9);
        }
        assert!(trace.last().observables.p_s >= 1.0 - 1e-9);
    }

    #[test]
    fn csv_and_json_forms() {
        let space = SearchSpace::new(3).unwrap();
        let s = ControlSchedule::new(vec![Segment::new(1.0, 1.0, 1.0)]).unwrap();
        let trace = evolve(&EffectiveState::initial(space), &s, 0.5).unwrap();
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), TRACE_CSV_HEADER);
        assert_eq!(lines.count(), 3);
        let json = trace.to_json_value();
        assert_eq!(json.as_array().unwrap().len(), 3);
        assert_eq!(json[2]["t_s"].as_f64().unwrap(), 1.0);
    }

    #[test]
    fn propagate_matches_final_sample() {
        let space = SearchSpace::new(7).unwrap();
        let s = ControlSchedule::new(vec![Segment::new(2.0, 1.0, 0.3), Segment::new(1.5, 0.2, 4.0)]).unwrap();
        let psi0 = EffectiveState::initial(space);
        let trace = evolve(&psi0, &s, 0.37).unwrap();
        let fin = propagate(&psi0, &s).unwrap();
        let o = fin.observables(0.2, 4.0);
        assert!((o.p_s - trace.last().observables.p_s).abs() < 1e-14);
        assert!((overlap_product(&fin) - o.overlap_product).norm() < 1e-15);
    }
}
