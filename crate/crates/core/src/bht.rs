//! Work accounting for quantum collision search that stores `k` classical
//! samples and then runs a Grover search over the remaining domain.

use std::f64::consts::PI;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::landauer_energy;
use crate::constants::{CONSTANTS_VERSION, H, HBAR};
use crate::error::{QlError, Result};
use crate::logspace::{bisect_increasing, log2_add, log2_pow2_minus_one};
use crate::scenario::scenario;

fn check_common(n: f64, total_time: f64, temperature: f64, p: f64) -> Result<()> {
    if !(n.is_finite() && n > 0.0) {
        return Err(QlError::domain("image bits must be positive", n));
    }
    if !(total_time.is_finite() && total_time > 0.0) {
        return Err(QlError::domain("total time must be positive", total_time));
    }
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(QlError::domain("temperature must be non-negative", temperature));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(QlError::domain("success probability must lie in (0, 1]", p));
    }
    Ok(())
}

/// Per-sample cost `a = (n+1)E_L + h/(4t_T)`.
fn per_sample(n: f64, total_time: f64, temperature: f64) -> f64 {
    (n + 1.0) * landauer_energy(temperature) + H / (4.0 * total_time)
}

/// `log2` of `k(n+1)E_L + k·h/(4t_T) + √(2^n P_s/k − 1)ħ/t_T`.
pub fn bht_log2_work(n: f64, k: f64, total_time: f64, temperature: f64, p: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(QlError::domain("samples must satisfy 1 <= k <= 2^n P_s", k));
    }
    log2_work_at(n, k.log2(), total_time, temperature, p)
}

/// Same as [`bht_log2_work`] with the sample count given as `log2 k`.
fn log2_work_at(n: f64, log2_k: f64, total_time: f64, temperature: f64, p: f64) -> Result<f64> {
    check_common(n, total_time, temperature, p)?;
    let log2_states = n + p.log2();
    if !(log2_k >= 0.0) || log2_k > log2_states {
        return Err(QlError::domain("samples must satisfy 1 <= k <= 2^n P_s", log2_k.exp2()));
    }
    let classical = log2_k + per_sample(n, total_time, temperature).log2();
    let quantum = 0.5 * log2_pow2_minus_one(log2_states - log2_k) + (HBAR / total_time).log2();
    Ok(log2_add(classical, quantum))
}

/// Work of the collision search with `k` stored samples and the optimal time split.
pub fn bht_work(n: f64, k: f64, total_time: f64, temperature: f64, p: f64) -> Result<f64> {
    Ok(bht_log2_work(n, k, total_time, temperature, p)?.exp2())
}

/// Time spent in the quantum stage when both stages run at their speed
/// limits: `t_s = t_T/(2πk/(4√(2^n P_s/k − 1)) + 1)`.
pub fn bht_split_time(n: f64, k: f64, total_time: f64, p: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(QlError::domain("samples must satisfy 1 <= k <= 2^n P_s", k));
    }
    split_time_at(n, k.log2(), total_time, p)
}

fn split_time_at(n: f64, log2_k: f64, total_time: f64, p: f64) -> Result<f64> {
    let log2_states = n + p.log2();
    if !(log2_k >= 0.0) || log2_k > log2_states {
        return Err(QlError::domain("samples must satisfy 1 <= k <= 2^n P_s", log2_k.exp2()));
    }
    let log2_ratio = (0.5 * PI).log2() + log2_k - 0.5 * log2_pow2_minus_one(log2_states - log2_k);
    Ok(total_time / (1.0 + log2_ratio.exp2()))
}

/// `log2 k*` with `k*^(3/2) = √(2^n P_s)ħ/(2 a t_T)`, the stationary point of
/// `k·a + √(2^n P_s/k)·ħ/t_T`, clamped to `k ≥ 1`.
pub fn bht_log2_optimal_samples(n: f64, total_time: f64, temperature: f64, p: f64) -> Result<f64> {
    check_common(n, total_time, temperature, p)?;
    let log2_b = 0.5 * (n + p.log2()) + (HBAR / total_time).log2();
    let log2_a = per_sample(n, total_time, temperature).log2();
    let log2_k = (2.0 / 3.0) * (log2_b - 1.0 - log2_a);
    Ok(log2_k.clamp(0.0, (n + p.log2()).max(0.0)))
}

/// Sample count from the closed form `2^(n/3) P_s^(1/3)/(X + 2π)^(2/3)` with
/// `X = 4(n+1)E_L t_T/ħ`. It solves `k^(3/2) = √(2^n P_s)ħ/(4 a t_T)`, a factor
/// `2^(2/3)` below the true stationary point.
pub fn bht_closed_form_log2_samples(n: f64, total_time: f64, temperature: f64, p: f64) -> Result<f64> {
    check_common(n, total_time, temperature, p)?;
    Ok((n + p.log2()) / 3.0 - (2.0 / 3.0) * closed_form_log2_x_plus_2pi(n, total_time, temperature))
}

fn closed_form_log2_x_plus_2pi(n: f64, total_time: f64, temperature: f64) -> f64 {
    let x = (n + 1.0) * landauer_energy(temperature) * 4.0 * total_time / HBAR;
    (x + 2.0 * PI).log2()
}

/// `log2` of the closed form `2^(n/3) P_s^(1/3) (X + 2π)^(1/3) (5/4) ħ/t_T`.
///
/// This is `1.25·Y` with `Y = (2^n P_s)^(1/3)(4 a t_T/ħ)^(1/3) ħ/t_T`; the
/// true minimum over `k` is `1.5·2^(-1/3)·Y ≈ 1.19·Y`.
pub fn bht_closed_form_log2_work(n: f64, total_time: f64, temperature: f64, p: f64) -> Result<f64> {
    check_common(n, total_time, temperature, p)?;
    Ok((n + p.log2()) / 3.0
        + closed_form_log2_x_plus_2pi(n, total_time, temperature) / 3.0
        + 1.25f64.log2()
        + (HBAR / total_time).log2())
}

/// `log2` of the work at the optimal sample count.
pub fn bht_log2_optimal_work(n: f64, total_time: f64, temperature: f64, p: f64) -> Result<f64> {
    let log2_k = bht_log2_optimal_samples(n, total_time, temperature, p)?;
    log2_work_at(n, log2_k, total_time, temperature, p)
}

/// Optimal collision-search plan for an `n`-bit image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BhtPlan {
    pub n: u32,
    /// Continuous optimum.
    pub k: f64,
    pub log2_k: f64,
    /// Best integer neighbor of `k`.
    pub k_rounded: f64,
    pub quantum_time: f64,
    pub total_time: f64,
    pub work: f64,
    pub log2_work: f64,
}

impl BhtPlan {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "log2_k": self.log2_k,
            "k_rounded": self.k_rounded,
            "t_s_s": self.quantum_time,
            "t_total_s": self.total_time,
            "work_J": self.work,
            "log2_work_J": self.log2_work,
            "constants_version": CONSTANTS_VERSION,
        })
    }
}

/// Optimal sample count, time split and work for an `n`-bit image.
pub fn bht_optimal(n: u32, total_time: f64, temperature: f64, p: f64) -> Result<BhtPlan> {
    let nf = n as f64;
    check_common(nf, total_time, temperature, p)?;
    if nf + p.log2() < 0.0 {
        return Err(QlError::domain("need 2^n P_s >= 1", p));
    }
    let log2_k = bht_log2_optimal_samples(nf, total_time, temperature, p)?;
    let k = log2_k.exp2();
    let log2_work = log2_work_at(nf, log2_k, total_time, temperature, p)?;
    let k_rounded = if k.is_finite() && k < 2f64.powi(52) {
        let max_k = (nf + p.log2()).exp2();
        [k.floor(), k.ceil()]
            .into_iter()
            .filter(|&c| c >= 1.0 && c <= max_k)
            .map(|c| {
                (
                    c,
                    bht_log2_work(nf, c, total_time, temperature, p).unwrap_or(f64::INFINITY),
                )
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|x| x.0)
            .unwrap_or(1.0)
    } else {
        k
    };
    Ok(BhtPlan {
        n,
        k,
        log2_k,
        k_rounded,
        quantum_time: split_time_at(nf, log2_k, total_time, p)?,
        total_time,
        work: log2_work.exp2(),
        log2_work,
    })
}

/// Which expression for the optimal work an image-size inversion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BhtWorkModel {
    /// Exact work at the true stationary sample count.
    Optimum,
    /// The `(5/4)` closed form.
    ClosedForm,
}

/// Smallest integer `n` whose optimal collision-search work exceeds `budget`.
pub fn bht_min_image_bits(budget: f64, total_time: f64, temperature: f64, p: f64, model: BhtWorkModel) -> Result<u32> {
    if !(budget.is_finite() && budget > 0.0) {
        return Err(QlError::domain("work budget must be positive", budget));
    }
    check_common(1.0, total_time, temperature, p)?;
    let target = budget.log2();
    let f = |n: f64| -> f64 {
        let v = match model {
            BhtWorkModel::Optimum => bht_log2_optimal_work(n, total_time, temperature, p),
            BhtWorkModel::ClosedForm => bht_closed_form_log2_work(n, total_time, temperature, p),
        };
        v.unwrap_or(f64::NEG_INFINITY) - target
    };
    let lo = (-p.log2()).max(1.0);
    let hi = 4096.0;
    if f(lo) > 0.0 {
        return Ok(lo.ceil() as u32);
    }
    if f(hi) <= 0.0 {
        return Err(QlError::range("budget exceeds the 4096-bit search bracket", budget));
    }
    let root = bisect_increasing(f, lo, hi, 1e-14);
    // The smallest integer strictly above the root, checked against rounding.
    let mut n = root.ceil();
    if f(n) <= 0.0 {
        n += 1.0;
    }
    while n - 1.0 >= lo && f(n - 1.0) > 0.0 {
        n -= 1.0;
    }
    Ok(n as u32)
}

/// Minimum image size for one registry scenario, next to the tabulated figure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BhtImageRow {
    pub scenario: String,
    pub temperature_k: f64,
    pub solver_bits: u32,
    pub closed_form_bits: u32,
    pub reported_bits: u32,
    pub agrees: bool,
}

/// Reference image sizes for the three registry scenarios.
pub const REPORTED_IMAGE_BITS: [(&str, u32); 3] = [("datacenter", 415), ("dyson", 788), ("cosmic", 1077)];

/// Solver output for each registry scenario alongside the reference value.
pub fn bht_image_report() -> Result<Vec<BhtImageRow>> {
    REPORTED_IMAGE_BITS
        .iter()
        .map(|&(name, reported)| {
            let s = scenario(name)?;
            let t = s.duration.seconds();
            let solver = bht_min_image_bits(s.work, t, s.temperature, s.success_probability, BhtWorkModel::Optimum)?;
            let closed = bht_min_image_bits(
                s.work,
                t,
                s.temperature,
                s.success_probability,
                BhtWorkModel::ClosedForm,
            )?;
            Ok(BhtImageRow {
                scenario: name.to_string(),
                temperature_k: s.temperature,
                solver_bits: solver,
                closed_form_bits: closed,
                reported_bits: reported,
                agrees: solver == reported,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn radicand_zero_leaves_classical_terms() {
        let (n, t, temp) = (20.0, 1.0, 300.0);
        let k = 2f64.powi(20);
        let w = bht_work(n, k, t, temp, 1.0).unwrap();
        assert_relative_eq!(w, k * 21.0 * landauer_energy(temp) + k * H / 4.0, max_relative = 1e-12);
        assert!(bht_work(n, 2.0 * k, t, temp, 1.0).is_err());
        assert!(bht_work(n, 0.5, t, temp, 1.0).is_err());
    }

    #[test]
    fn zero_temperature_single_sample() {
        let w = bht_work(30.0, 1.0, 2.0, 0.0, 0.5).unwrap();
        let expected = H / 8.0 + (2f64.powi(29) - 1.0).sqrt() * HBAR / 2.0;
        assert_relative_eq!(w, expected, max_relative = 1e-12);
    }

    #[test]
    fn split_time_matches_speed_limits() {
        let (n, k, t_t, p) = (40.0, 1000.0, 3.0, 0.25);
        let t_s = bht_split_time(n, k, t_t, p).unwrap();
        let r = (2f64.powf(n) * p / k - 1.0).sqrt();
        // Classical stage: k evaluations of h/(4δt) with δt = (t_T − t_s)/k.
        let classical = H * k / (4.0 * (t_t - t_s));
        let quantum = r * HBAR / t_s;
        assert_relative_eq!(classical, quantum, max_relative = 1e-12);
        assert!(t_s > 0.0 && t_s <= t_t);
    }

    #[test]
    fn optimal_plan_is_local_minimum() {
        for (n, temp) in [(20, 0.0), (40, 1e-12), (48, 0.0)] {
            let plan = bht_optimal(n, 1.0, temp, 1.0).unwrap();
            let w = |k: f64| bht_work(n as f64, k, 1.0, temp, 1.0).unwrap();
            assert!(plan.k > 1.0);
            assert!(plan.work <= w(2.0 * plan.k) && plan.work <= w(plan.k / 2.0));
            assert!(plan.work >= plan.k * (n as f64 + 1.0) * landauer_energy(temp));
            assert!(plan.quantum_time > 0.0 && plan.quantum_time <= plan.total_time);
            assert!(w(plan.k_rounded) <= w(plan.k_rounded + 1.0));
        }
    }

    #[test]
    fn room_temperature_clamps_to_one_sample() {
        let plan = bht_optimal(40, 1.0, 300.0, 1.0).unwrap();
        assert_eq!(plan.k, 1.0);
        let json = plan.to_json();
        for key in [
            "n",
            "k",
            "log2_k",
            "t_s_s",
            "t_total_s",
            "work_J",
            "log2_work_J",
            "constants_version",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn closed_form_relations() {
        let (n, t, temp, p) = (60.0, 1.0, 1e-12, 1.0);
        let k_true = bht_log2_optimal_samples(n, t, temp, p).unwrap();
        let k_closed = bht_closed_form_log2_samples(n, t, temp, p).unwrap();
        assert_relative_eq!(k_true - k_closed, 2.0 / 3.0, max_relative = 1e-12);
        let w_true = bht_log2_optimal_work(n, t, temp, p).unwrap();
        let w_closed = bht_closed_form_log2_work(n, t, temp, p).unwrap();
        assert_relative_eq!(
            (w_closed - w_true).exp2(),
            1.25 / (1.5 * 2f64.powf(-1.0 / 3.0)),
            max_relative = 1e-6
        );
    }

    #[test]
    fn image_bits_are_monotone_in_budget() {
        let (t, temp, p) = (1e8, 300.0, 1e-2);
        let mut prev = 0;
        for e in [1e10, 1e16, 1e22, 1e28] {
            let n = bht_min_image_bits(e, t, temp, p, BhtWorkModel::Optimum).unwrap();
            assert!(n >= prev);
            prev = n;
            assert!(bht_log2_optimal_work(n as f64, t, temp, p).unwrap() > e.log2());
            assert!(bht_log2_optimal_work(n as f64 - 1.0, t, temp, p).unwrap() <= e.log2());
        }
    }

    #[test]
    fn report_lists_three_scenarios() {
        let rows = bht_image_report().unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert!(r.solver_bits >= r.closed_form_bits);
            assert_eq!(r.agrees, r.solver_bits == r.reported_bits);
        }
    }
}
