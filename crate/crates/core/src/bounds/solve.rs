use std::f64::consts::PI;

use super::energy::landauer_energy;
use super::query::{BoundFlag, BoundKind, BoundQuery, BoundResult, Unknown};
use crate::constants::{H, HBAR};
use crate::error::{QlError, Result};
use crate::logspace::{bisect_increasing, log2_add, log2_pow2_minus_one};

/// Bracket for solving the key length.
pub const MAX_SOLVE_BITS: f64 = 4096.0;

/// Every bound here has the shape `W(t) = floor + coeff/t`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct WorkParts {
    log2_floor: f64,
    log2_coeff: f64,
    /// Linear floor when it is directly computable, so pure Landauer
    /// floors come out exact.
    exact_floor: Option<f64>,
    /// Linear coefficient when no intermediate overflows.
    exact_coeff: Option<f64>,
    offset: bool,
}

impl WorkParts {
    fn floor(&self) -> f64 {
        self.exact_floor.unwrap_or_else(|| self.log2_floor.exp2())
    }

    fn coeff(&self) -> f64 {
        self.exact_coeff.unwrap_or_else(|| self.log2_coeff.exp2())
    }

    fn log2_work(&self, time: f64) -> f64 {
        log2_add(self.log2_floor, self.log2_coeff - time.log2())
    }

    fn work(&self, time: f64) -> f64 {
        let floor = self.floor();
        let dynamic = self.coeff() / time;
        if floor.is_finite() && dynamic.is_finite() {
            floor + dynamic
        } else {
            self.log2_work(time).exp2()
        }
    }
}

fn log2_or_neg_inf(x: f64) -> f64 {
    if x > 0.0 {
        x.log2()
    } else {
        f64::NEG_INFINITY
    }
}

/// `asin(√((P − 2^-n)/(1 − 2^-n)))`, the ballistic rotation angle needed for `P`.
fn ballistic_angle(n: f64, p: f64) -> f64 {
    let g2 = (-n).exp2();
    if p <= g2 {
        return 0.0;
    }
    ((p - g2) / (1.0 - g2)).sqrt().min(1.0).asin()
}

fn parts(kind: BoundKind, n: f64, p: f64, temperature: f64, corrected: u32) -> WorkParts {
    let e_l = landauer_energy(temperature);
    let log2_p = log2_or_neg_inf(p);
    let x = n + log2_p;
    let states = if p == 0.0 { 0.0 } else { n.exp2() * p };
    let linear = |v: f64| (v.is_finite() && v > 0.0).then_some(v);
    match kind {
        BoundKind::Classical => {
            let exact = states * e_l + 2.0 * n * e_l;
            WorkParts {
                log2_floor: log2_add(x + log2_or_neg_inf(e_l), log2_or_neg_inf(2.0 * n * e_l)),
                log2_coeff: x + (H / 4.0).log2(),
                exact_floor: exact.is_finite().then_some(exact),
                exact_coeff: linear(states * H / 4.0),
                offset: false,
            }
        }
        BoundKind::Quantum => {
            let offset = x <= 0.0;
            WorkParts {
                log2_floor: f64::NEG_INFINITY,
                exact_floor: Some(0.0),
                log2_coeff: if offset {
                    f64::NEG_INFINITY
                } else {
                    0.5 * log2_pow2_minus_one(x) + HBAR.log2()
                },
                exact_coeff: if offset {
                    None
                } else {
                    linear((states - 1.0).sqrt() * HBAR)
                },
                offset,
            }
        }
        BoundKind::Gate => {
            let offset = x <= 0.0;
            let shrink = PI - (1.0 - 0.5 * n).exp2();
            WorkParts {
                log2_floor: log2_or_neg_inf((2.0 * n + corrected as f64) * e_l),
                exact_floor: Some((2.0 * n + corrected as f64) * e_l),
                log2_coeff: if offset {
                    f64::NEG_INFINITY
                } else {
                    log2_pow2_minus_one(0.5 * x) + shrink.log2() + HBAR.log2()
                },
                exact_coeff: if offset {
                    None
                } else {
                    linear((states.sqrt() - 1.0) * shrink * HBAR)
                },
                offset,
            }
        }
        BoundKind::Ballistic | BoundKind::Bht => {
            let angle = ballistic_angle(n, p);
            WorkParts {
                log2_floor: f64::NEG_INFINITY,
                exact_floor: Some(0.0),
                log2_coeff: log2_or_neg_inf(angle) + log2_add(0.5 * n, 0.0) + HBAR.log2(),
                exact_coeff: linear(angle * ((0.5 * n).exp2() + 1.0) * HBAR),
                offset: angle == 0.0,
            }
        }
    }
}

fn result(
    kind: BoundKind,
    query: &BoundQuery,
    value: f64,
    log2_value: Option<f64>,
    flags: Vec<BoundFlag>,
) -> BoundResult {
    BoundResult {
        value,
        log2_value,
        bound_kind: kind,
        formula_tag: kind.formula_tag().to_string(),
        inputs: query.clone(),
        unit: query.unknown.unit(),
        flags,
    }
}

/// Solves a bound of the given kind for the query's unknown.
pub fn solve_bound(kind: BoundKind, query: &BoundQuery) -> Result<BoundResult> {
    query.validate()?;
    if kind == BoundKind::Bht {
        return Err(QlError::domain(
            "collision-search plans are solved by the bht module",
            "bht",
        ));
    }
    if kind == BoundKind::Classical && query.temperature.is_none() {
        return Err(QlError::domain("missing input temperature", "temperature"));
    }
    let temperature = query.temperature.unwrap_or(0.0);
    let corrected = query.corrected_errors.unwrap_or(0);
    let mut flags = Vec::new();
    match query.unknown {
        Unknown::Work => {
            let n = query.require("n", query.n)?;
            let p = query.require("psuccess", query.success_probability)?;
            let t = query.require("time", query.time)?;
            let wp = parts(kind, n, p, temperature, corrected);
            if wp.offset {
                flags.push(BoundFlag::OffsetRegime);
            }
            let log2_w = wp.log2_work(t);
            Ok(result(kind, query, wp.work(t), Some(log2_w), flags))
        }
        Unknown::Time => {
            let n = query.require("n", query.n)?;
            let p = query.require("psuccess", query.success_probability)?;
            let wp = parts(kind, n, p, temperature, corrected);
            if wp.offset {
                flags.push(BoundFlag::OffsetRegime);
            }
            if wp.log2_coeff == f64::NEG_INFINITY {
                if !wp.offset {
                    flags.push(BoundFlag::TimeUnconstrained);
                }
                let budget_ok = match (query.work, query.power) {
                    (Some(w), _) => w >= wp.floor(),
                    _ => true,
                };
                if !budget_ok {
                    return Err(QlError::Infeasible {
                        message: "work is below the time-independent floor".into(),
                        floor: wp.floor(),
                    });
                }
                return Ok(result(kind, query, 0.0, None, flags));
            }
            let t = match (query.work, query.power) {
                (Some(w), _) => {
                    let floor = wp.floor();
                    if !(w > floor) {
                        return Err(QlError::Infeasible {
                            message: "work does not exceed the time-independent floor".into(),
                            floor,
                        });
                    }
                    wp.coeff() / (w - floor)
                }
                (None, Some(power)) => time_at_power(&wp, power)?,
                (None, None) => return Err(QlError::domain("missing input work (or power)", "work")),
            };
            Ok(result(kind, query, t, None, flags))
        }
        Unknown::SuccessProbability => {
            let n = query.require("n", query.n)?;
            let t = query.require("time", query.time)?;
            let w = query.budget()?;
            let p = solve_probability(kind, n, w, t, temperature, corrected)?;
            if p > 1.0 {
                flags.push(BoundFlag::Saturated);
            }
            Ok(result(kind, query, p.min(1.0), None, flags))
        }
        Unknown::Bits => {
            let p = query.require("psuccess", query.success_probability)?;
            let t = query.require("time", query.time)?;
            let w = query.budget()?;
            if p == 0.0 {
                return Err(QlError::domain("solving for n needs a positive success probability", p));
            }
            let n = solve_bits(kind, p, w, t, temperature, corrected)?;
            Ok(result(kind, query, n, None, flags))
        }
    }
}

/// Positive root of `P·t = floor + coeff/t`.
fn time_at_power(wp: &WorkParts, power: f64) -> Result<f64> {
    let floor = wp.floor();
    let coeff = wp.coeff();
    let t = (floor + (floor * floor + 4.0 * power * coeff).sqrt()) / (2.0 * power);
    if t.is_finite() && t > 0.0 {
        return Ok(t);
    }
    // Work in log2 when the coefficients do not fit a double.
    let log2_power = power.log2();
    let f = |lt: f64| log2_power + lt - wp.log2_work(lt.exp2());
    let lt = bisect_increasing(f, -1000.0, 1000.0, 1e-15);
    let t = lt.exp2();
    if !(t.is_finite() && t > 0.0) {
        return Err(QlError::range("solved time is not representable", lt));
    }
    Ok(t)
}

fn solve_probability(kind: BoundKind, n: f64, w: f64, t: f64, temperature: f64, corrected: u32) -> Result<f64> {
    let e_l = landauer_energy(temperature);
    match kind {
        BoundKind::Classical => {
            let floor = 2.0 * n * e_l;
            if w < floor {
                return Err(QlError::Infeasible {
                    message: "work is below the initialization floor 2n k_B T ln2".into(),
                    floor,
                });
            }
            let per_state = e_l + H / (4.0 * t);
            Ok(((w - floor).log2() - n - per_state.log2()).exp2())
        }
        BoundKind::Quantum => {
            let y = w.log2() + t.log2() - HBAR.log2();
            Ok((log2_add(2.0 * y, 0.0) - n).exp2())
        }
        BoundKind::Gate => {
            let floor = (2.0 * n + corrected as f64) * e_l;
            if w < floor {
                return Err(QlError::Infeasible {
                    message: "work is below the Landauer floor (2n + K) k_B T ln2".into(),
                    floor,
                });
            }
            let shrink = PI - (1.0 - 0.5 * n).exp2();
            let z = (w - floor) * t / (HBAR * shrink);
            Ok((2.0 * (1.0 + z).log2() - n).exp2())
        }
        BoundKind::Ballistic | BoundKind::Bht => ballistic_success(n, w, t),
    }
}

fn solve_bits(kind: BoundKind, p: f64, w: f64, t: f64, temperature: f64, corrected: u32) -> Result<f64> {
    if kind == BoundKind::Quantum {
        let y = w.log2() + t.log2() - HBAR.log2();
        return Ok((log2_add(2.0 * y, 0.0) - p.log2()).max(0.0));
    }
    let target = w.log2();
    let f = |n: f64| parts(kind, n, p, temperature, corrected).log2_work(t) - target;
    let lo = 1.0;
    if f(lo) > 0.0 {
        return Err(QlError::Infeasible {
            message: "budget does not cover a single-bit search".into(),
            floor: parts(kind, lo, p, temperature, corrected).work(t),
        });
    }
    if f(MAX_SOLVE_BITS) < 0.0 {
        return Err(QlError::range("budget covers more than the 4096-bit solver bracket", w));
    }
    Ok(bisect_increasing(f, lo, MAX_SOLVE_BITS, 1e-14))
}

/// Classical search bound solved for the query's unknown.
pub fn classical_bound(query: &BoundQuery) -> Result<BoundResult> {
    solve_bound(BoundKind::Classical, query)
}

/// Fundamental quantum bound `W ≥ √(2^n P_s − 1)·ħ/t` solved for the unknown.
pub fn quantum_bound(query: &BoundQuery) -> Result<BoundResult> {
    solve_bound(BoundKind::Quantum, query)
}

/// Ballistic success relation solved for the unknown.
pub fn ballistic_bound(query: &BoundQuery) -> Result<BoundResult> {
    solve_bound(BoundKind::Ballistic, query)
}

/// Work of a gate-based Grover search including `K` corrected errors:
/// `(2n + K)E_L + ħ(√(P_s 2^n) − 1)(π − 2^(1−n/2))/t`, dynamic part clamped at zero.
pub fn gate_bound(n: f64, success_probability: f64, time: f64, corrected_errors: u32, temperature: f64) -> Result<f64> {
    let q = BoundQuery::new(Unknown::Work)
        .with_n(n)
        .with_success_probability(success_probability)
        .with_time(time)
        .with_corrected_errors(corrected_errors)
        .with_temperature(temperature);
    if !(success_probability > 0.0) {
        return Err(QlError::domain(
            "success probability must be positive",
            success_probability,
        ));
    }
    Ok(solve_bound(BoundKind::Gate, &q)?.value)
}

/// `P_s(t) = 2^-n + (1 − 2^-n) sin²(W t/((2^(n/2) + 1)ħ))` for `0 ≤ t ≤ t_F`.
pub fn ballistic_success(n: f64, work: f64, time: f64) -> Result<f64> {
    if !(n >= 0.0 && work > 0.0 && time >= 0.0) {
        return Err(QlError::domain(
            "need n >= 0, work > 0, t >= 0",
            format!("n={n}, W={work}, t={time}"),
        ));
    }
    let g2 = (-n).exp2();
    if time == 0.0 {
        return Ok(g2);
    }
    let log2_arg = work.log2() + time.log2() - log2_add(0.5 * n, 0.0) - HBAR.log2();
    let arg = log2_arg.exp2();
    if arg > 0.5 * PI * (1.0 + 1e-12) {
        let t_f = ballistic_deterministic_time(n, work)?;
        return Err(QlError::range(
            format!("t exceeds the deterministic time t_F = {t_f:e} s"),
            time,
        ));
    }
    Ok(g2 + (1.0 - g2) * arg.min(0.5 * PI).sin().powi(2))
}

/// `t_F = (π/2)(2^(n/2) + 1)ħ/W`.
pub fn ballistic_deterministic_time(n: f64, work: f64) -> Result<f64> {
    if !(n >= 0.0 && work > 0.0) {
        return Err(QlError::domain("need n >= 0 and work > 0", format!("n={n}, W={work}")));
    }
    Ok((log2_add(0.5 * n, 0.0) + (0.5 * PI * HBAR).log2() - work.log2()).exp2())
}

/// Work for which the ballistic search finishes deterministically at `t`.
///
/// `W·t_F` is fixed by `n`, so this is the same expression with `W` and `t` swapped.
pub fn ballistic_deterministic_work(n: f64, time: f64) -> Result<f64> {
    ballistic_deterministic_time(n, time)
}

/// Shortest time in which a source of constant `power` can pay the quantum
/// bound, i.e. the root of `P·t = √(2^n P_s − 1)ħ/t`.
pub fn quantum_time_at_power(n: f64, success_probability: f64, power: f64) -> Result<f64> {
    let q = BoundQuery::new(Unknown::Time)
        .with_n(n)
        .with_success_probability(success_probability)
        .with_power(power);
    Ok(quantum_bound(&q)?.value)
}
