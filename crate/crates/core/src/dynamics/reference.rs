use num_complex::Complex64;

use super::evolve::{sample_times, Trace, TracePoint, NORM_TOLERANCE};
use super::schedule::ControlSchedule;
use super::space::{closed_form_eigenenergies, Observables, SearchSpace};
use crate::error::{QlError, Result};

/// Largest key length the brute-force integrator accepts.
pub const FULL_SPACE_MAX_BITS: u32 = 14;

/// State vector on all `2^n` basis states with a marked solution index.
struct FullSpace {
    amplitudes: Vec<Complex64>,
    solution: usize,
    inv_sqrt_dim: f64,
}

impl FullSpace {
    fn initial(n: u32, solution: usize) -> Self {
        let dim = 1usize << n;
        let inv_sqrt_dim = 1.0 / (dim as f64).sqrt();
        FullSpace {
            amplitudes: vec![Complex64::new(inv_sqrt_dim, 0.0); dim],
            solution,
            inv_sqrt_dim,
        }
    }

    /// `⟨i|v⟩` for the uniform superposition `|i⟩`.
    fn project_initial(&self, v: &[Complex64]) -> Complex64 {
        v.iter().sum::<Complex64>() * self.inv_sqrt_dim
    }

    /// `out = (ω_i|i⟩⟨i| + ω_s|s⟩⟨s|) v`, written for a general vector.
    fn apply_hamiltonian(&self, omega_i: f64, omega_s: f64, v: &[Complex64], out: &mut [Complex64]) {
        let along_i = self.project_initial(v) * omega_i * self.inv_sqrt_dim;
        for o in out.iter_mut() {
            *o = along_i;
        }
        out[self.solution] += v[self.solution] * omega_s;
    }

    /// `exp(-i H dt)` by a Taylor series over sub-steps with `‖H‖·h ≤ 1/2`.
    fn step(&mut self, omega_i: f64, omega_s: f64, dt: f64, scratch: &mut [Vec<Complex64>; 2]) {
        let norm_bound = omega_i + omega_s;
        if dt <= 0.0 || norm_bound == 0.0 {
            return;
        }
        let substeps = (norm_bound * dt / 0.5).ceil().max(1.0) as usize;
        let h = dt / substeps as f64;
        for _ in 0..substeps {
            let [term, next] = scratch;
            term.copy_from_slice(&self.amplitudes);
            for k in 1..60 {
                self.apply_hamiltonian(omega_i, omega_s, term, next);
                let factor = Complex64::new(0.0, -h / k as f64);
                let mut size = 0.0;
                for (t, x) in term.iter_mut().zip(next.iter()) {
                    *t = x * factor;
                    size += t.norm_sqr();
                }
                for (a, t) in self.amplitudes.iter_mut().zip(term.iter()) {
                    *a += t;
                }
                if size < 1e-40 {
                    break;
                }
            }
        }
    }

    fn norm_error(&self) -> f64 {
        (self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs()
    }

    fn observables(&self, omega_i: f64, omega_s: f64, space: SearchSpace) -> Observables {
        let a_i = self.project_initial(&self.amplitudes);
        let a_s = self.amplitudes[self.solution];
        let product = a_s.conj() * a_i;
        let (e_plus, e_minus) =
            closed_form_eigenenergies(0.5 * (omega_i + omega_s), 0.5 * (omega_i - omega_s), space.overlap_sq());
        Observables {
            p_s: a_s.norm_sqr(),
            p_i: a_i.norm_sqr(),
            overlap_product: product,
            alpha_ab: product.arg(),
            e_plus,
            e_minus,
        }
    }
}

/// Integrates the same schedule on the full `2^n`-dimensional register,
/// with `|s⟩` the basis state `solution_index`.
///
/// Independent of the two-level reduction: the Hamiltonian is applied as
/// projectors on the whole vector and exponentiated by series. Samples
/// are taken at the same instants as [`super::evolve::evolve`].
pub fn full_space_reference(
    space: SearchSpace,
    schedule: &ControlSchedule,
    sample_step: f64,
    solution_index: u64,
) -> Result<Trace> {
    let n = space.bits();
    if n > FULL_SPACE_MAX_BITS {
        return Err(QlError::Capacity {
            message: format!("full-space reference is limited to n <= {FULL_SPACE_MAX_BITS}, got {n}"),
        });
    }
    if solution_index >= 1u64 << n {
        return Err(QlError::range(
            format!("solution index must be below 2^{n}"),
            solution_index,
        ));
    }
    let times = sample_times(schedule, sample_step)?;
    let segments = schedule.segments();
    let mut psi = FullSpace::initial(n, solution_index as usize);
    let dim = psi.amplitudes.len();
    let mut scratch = [vec![Complex64::default(); dim], vec![Complex64::default(); dim]];
    let mut points = Vec::with_capacity(times.len());
    let mut t_now = 0.0;
    let mut seg_index = 0;
    let mut seg_end = segments[0].duration;
    for (t, idx) in times {
        while seg_index < idx {
            let seg = segments[seg_index];
            psi.step(seg.omega_i, seg.omega_s, seg_end - t_now, &mut scratch);
            t_now = seg_end;
            seg_index += 1;
            seg_end += segments[seg_index].duration;
        }
        let seg = segments[idx];
        psi.step(seg.omega_i, seg.omega_s, t - t_now, &mut scratch);
        t_now = t;
        let norm_error = psi.norm_error();
        if norm_error > NORM_TOLERANCE {
            return Err(QlError::NormDrift {
                drift: norm_error,
                time: t,
            });
        }
        points.push(TracePoint {
            t,
            omega_i: seg.omega_i,
            omega_s: seg.omega_s,
            observables: psi.observables(seg.omega_i, seg.omega_s, space),
            norm_error,
        });
    }
    Ok(Trace {
        points,
        underflow: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve::evolve;
    use crate::dynamics::schedule::Segment;
    use crate::dynamics::space::EffectiveState;

    #[test]
    fn zero_hamiltonian_is_static() {
        let space = SearchSpace::new(4).unwrap();
        let s = ControlSchedule::new(vec![Segment::new(2.0, 0.0, 0.0)]).unwrap();
        let trace = full_space_reference(space, &s, 0.5, 3).unwrap();
        for p in &trace.points {
            assert!((p.observables.p_s - 1.0 / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn guards() {
        let s = ControlSchedule::new(vec![Segment::new(1.0, 1.0, 1.0)]).unwrap();
        let err = full_space_reference(SearchSpace::new(15).unwrap(), &s, 0.5, 0).unwrap_err();
        assert_eq!(err.kind(), "capacity");
        assert!(full_space_reference(SearchSpace::new(3).unwrap(), &s, 0.5, 8).is_err());
    }

    #[test]
    fn agrees_with_reduction_and_ignores_solution_index() {
        let space = SearchSpace::new(6).unwrap();
        let s = ControlSchedule::new(vec![
            Segment::new(1.3, 2.0, 0.5),
            Segment::new(0.7, 0.0, 3.0),
            Segment::new(2.1, 1.0, 1.0),
        ])
        .unwrap();
        let eff = evolve(&EffectiveState::initial(space), &s, 0.2).unwrap();
        for index in [0, 17, 63] {
            let full = full_space_reference(space, &s, 0.2, index).unwrap();
            assert_eq!(full.points.len(), eff.points.len());
            for (a, b) in eff.points.iter().zip(&full.points) {
                assert_eq!(a.t, b.t);
                assert!((a.observables.p_s - b.observables.p_s).abs() < 1e-12);
                assert!((a.observables.p_i - b.observables.p_i).abs() < 1e-12);
                assert!((a.observables.overlap_product - b.observables.overlap_product).norm() < 1e-12);
            }
        }
    }
}
