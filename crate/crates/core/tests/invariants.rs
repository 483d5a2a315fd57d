//! Cross-module properties exercised through the public API.

use num_complex::Complex64;
use proptest::prelude::*;
use qlimits_core::bht::{bht_log2_optimal_work, bht_optimal};
use qlimits_core::bounds::{landauer_energy, prefactor_b};
use qlimits_core::constants::HBAR;
use qlimits_core::dynamics::{
    ballistic_schedule, effective_hamiltonian, evolve, full_space_reference, ControlSchedule, EffectiveState,
    SearchSpace, Segment,
};
use qlimits_core::keylength::{classical_keylength, equivalent_quantum_keylength, KeylengthReport};
use qlimits_core::scenario::scenarios;

fn segment() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.05f64..1.0, 0.0f64..2.0, 0.0f64..2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_stays_unitary_over_long_traces(
        n in 1u32..=200,
        segs in proptest::collection::vec(segment(), 1..6),
    ) {
        let space = SearchSpace::new(n).unwrap();
        let scale = 2f64.powf(0.5 * n.min(40) as f64);
        let schedule = ControlSchedule::new(
            segs.iter().map(|&(d, wi, ws)| Segment::new(d, wi * scale, ws * scale)).collect(),
        )
        .unwrap();
        let trace = evolve(&EffectiveState::initial(space), &schedule, schedule.total_duration() / 1e4).unwrap();
        prop_assert!(trace.points.len() >= 10_000);
        for w in trace.points.windows(2) {
            prop_assert!(w[1].t > w[0].t);
        }
        for p in &trace.points {
            let o = &p.observables;
            prop_assert!(p.norm_error <= 1e-9);
            prop_assert!(o.overlap_product.norm_sqr() <= o.p_i * o.p_s + 1e-12);
            if o.overlap_product.norm() > 0.0 {
                prop_assert!((o.overlap_product.arg() - o.alpha_ab).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reduction_matches_full_space(
        n in 1u32..=10,
        segs in proptest::collection::vec(segment(), 5),
        index in any::<u64>(),
    ) {
        let space = SearchSpace::new(n).unwrap();
        let scale = 2f64.powf(0.5 * n as f64);
        let schedule = ControlSchedule::new(
            segs.iter().map(|&(d, wi, ws)| Segment::new(d, wi * scale, ws * scale)).collect(),
        )
        .unwrap();
        let step = schedule.total_duration() / 30.0;
        let reduced = evolve(&EffectiveState::initial(space), &schedule, step).unwrap();
        let full = full_space_reference(space, &schedule, step, index % (1u64 << n)).unwrap();
        prop_assert_eq!(reduced.points.len(), full.points.len());
        for (a, b) in reduced.points.iter().zip(&full.points) {
            let (a, b) = (&a.observables, &b.observables);
            prop_assert!((a.p_s - b.p_s).abs() <= 1e-9);
            prop_assert!((a.p_i - b.p_i).abs() <= 1e-9);
            prop_assert!((a.overlap_product.re - b.overlap_product.re).abs() <= 1e-9);
            prop_assert!((a.overlap_product.im - b.overlap_product.im).abs() <= 1e-9);
        }
    }

    #[test]
    fn ballistic_gain_respects_the_envelope(n in 2u32..=60, omega in 1.0f64..1e6) {
        let space = SearchSpace::new(n).unwrap();
        let g = space.overlap();
        let schedule = ballistic_schedule(space, HBAR * omega * (1.0 + g)).unwrap();
        let trace = evolve(&EffectiveState::initial(space), &schedule, schedule.total_duration() / 200.0).unwrap();
        let b = prefactor_b(0.0, n as f64).unwrap();
        let p0 = trace.points[0].observables.p_s;
        for p in &trace.points {
            let w = p.observables.e_plus;
            let envelope = b * (w * p.t / HBAR).powi(2) * space.overlap_sq();
            prop_assert!(p.observables.p_s - p0 <= envelope * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn eigenstates_have_real_overlap(n in 1u32..=60, wi in 0.0f64..10.0, ws in 0.0f64..10.0) {
        let space = SearchSpace::new(n).unwrap();
        let m = effective_hamiltonian(space, wi, ws).unwrap().matrix();
        let (a, b, d) = (m[0][0], m[0][1], m[1][1]);
        // Eigenvectors of a real symmetric 2x2 matrix via the rotation angle.
        let theta = 0.5 * (2.0 * b).atan2(a - d);
        for (c1, c2) in [(theta.cos(), theta.sin()), (-theta.sin(), theta.cos())] {
            let psi = EffectiveState::from_amplitudes(space, Complex64::new(c1, 0.0), Complex64::new(c2, 0.0)).unwrap();
            let mut states = vec![psi];
            // For large n, |A| after propagation sits at rounding level and its phase is noise.
            if n <= 20 {
                states.push(psi.propagated(wi, ws, 0.37).unwrap());
            }
            for state in states {
                let o = state.observables(wi, ws);
                if o.overlap_product.norm() > 1e-12 {
                    prop_assert!(o.alpha_ab.sin().abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn bht_work_grows_with_image_size(n in 2u32..500, t in 1e-3f64..1e6, temp in 0.0f64..400.0, lp in -1.0f64..0.0) {
        let p = lp.exp2();
        let a = bht_log2_optimal_work(n as f64, t, temp, p).unwrap();
        let b = bht_log2_optimal_work(n as f64 + 1.0, t, temp, p).unwrap();
        prop_assert!(b > a);
    }

    #[test]
    fn bht_plan_invariants(n in 2u32..300, t in 1e-3f64..1e6, temp in 0.0f64..400.0) {
        let plan = bht_optimal(n, t, temp, 1.0).unwrap();
        prop_assert!(plan.k >= 1.0);
        prop_assert!(plan.quantum_time > 0.0 && plan.quantum_time <= t);
        let floor = plan.k * (n as f64 + 1.0) * landauer_energy(temp);
        prop_assert!(plan.work >= floor * (1.0 - 1e-12));
    }

    #[test]
    fn samples_stay_far_below_cube_root_when_erasure_dominates(n in 30u32..300, temp in 1.0f64..400.0) {
        let t = 1e3;
        prop_assume!(landauer_energy(temp) > 1e3 * HBAR / t);
        let plan = bht_optimal(n, t, temp, 1.0).unwrap();
        prop_assert!(plan.log2_k < n as f64 / 3.0 - 3.0);
    }

    #[test]
    fn quantum_secure_length_is_at_least_classical(lw in 0.0f64..80.0, lt in 0.0f64..40.0, lp in -40.0f64..0.0) {
        let (w, t, p) = (10f64.powf(lw), 10f64.powf(lt), 2f64.powf(lp));
        let quantum = equivalent_quantum_keylength(w, t, p).unwrap();
        let classical = classical_keylength(w, t, 2.7, p).unwrap();
        prop_assert!(quantum >= classical.bits);
    }
}

#[test]
fn registry_quantum_lengths_exceed_classical_ones() {
    for s in scenarios() {
        let r = KeylengthReport::for_scenario(&s).unwrap();
        if let Some(c) = r.classical_bits {
            assert!(r.quantum_bits >= c, "{}", s.name);
        }
        assert!(r.quantum_bits >= r.classical_solved.bits, "{}", s.name);
    }
}
