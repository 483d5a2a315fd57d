//! Key lengths that an adversary budget can or cannot break, and the
//! largest budget the observable universe allows.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{solve_bound, BoundKind, BoundQuery, Unknown};
use crate::constants::{C, CONSTANTS_VERSION, G, HBAR, MEGAPARSEC, SOLAR_LUMINOSITY};
use crate::error::{QlError, Result};
use crate::logspace::{log2_add, log2_pow2_minus_one};
use crate::numfmt::fmt17;
use crate::scenario::Scenario;
use crate::units::Duration;

/// Bit counts within this distance of an integer are taken as that integer,
/// so that budgets built from an exact requirement land on it.
const SNAP: f64 = 1e-9;

fn snapped_ceil(x: f64) -> u32 {
    let r = x.round();
    let v = if (x - r).abs() < SNAP { r } else { x.ceil() };
    v.max(0.0) as u32
}

fn snapped_floor(x: f64) -> u32 {
    let r = x.round();
    let v = if (x - r).abs() < SNAP { r } else { x.floor() };
    v.max(0.0) as u32
}

fn check_budget(work: f64, time: f64) -> Result<()> {
    if !(work.is_finite() && work > 0.0) {
        return Err(QlError::domain("work must be positive", work));
    }
    if !(time.is_finite() && time > 0.0) {
        return Err(QlError::domain("time must be positive", time));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(QlError::domain("success probability must lie in (0, 1]", p));
    }
    Ok(())
}

/// `log2(((W t/ħ)² + 1)/P_s)`: the key size at which the fundamental quantum
/// bound equals the budget.
fn quantum_break_even_bits(work: f64, time: f64, p: f64) -> Result<f64> {
    check_budget(work, time)?;
    check_probability(p)?;
    let y = work.log2() + time.log2() - HBAR.log2();
    Ok(log2_add(2.0 * y, 0.0) - p.log2())
}

/// Smallest key length whose fundamental quantum work requirement is not
/// covered by the budget.
pub fn equivalent_quantum_keylength(work: f64, time: f64, p: f64) -> Result<u32> {
    Ok(snapped_ceil(quantum_break_even_bits(work, time, p)?))
}

/// Largest key length the budget recovers with probability at least `P_s`.
pub fn max_recoverable_keylength(work: f64, time: f64, p: f64) -> Result<u32> {
    Ok(snapped_floor(quantum_break_even_bits(work, time, p)?))
}

/// Largest key found with certainty by ballistic evolution, from
/// `t_F = (π/2)(2^(n/2) + 1)ħ/W ≤ t`. Returns 0 when not even one bit fits.
pub fn max_deterministic_keylength(work: f64, time: f64) -> Result<u32> {
    check_budget(work, time)?;
    // 2^(n/2) = 2Wt/(πħ) − 1.
    let x = 1.0 + work.log2() + time.log2() - (PI * HBAR).log2();
    if x <= 1.0 {
        return Ok(0);
    }
    Ok(snapped_floor(2.0 * log2_pow2_minus_one(x)))
}

/// Classical key length matching a budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassicalKeylength {
    pub bits: u32,
    /// The budget does not even cover the one-bit search; `bits` is 0.
    pub below_floor: bool,
}

/// Smallest key length whose classical exhaustive-search requirement is not
/// covered by the budget.
pub fn classical_keylength(work: f64, time: f64, temperature: f64, p: f64) -> Result<ClassicalKeylength> {
    check_budget(work, time)?;
    check_probability(p)?;
    let query = BoundQuery::new(Unknown::Bits)
        .with_work(work)
        .with_time(time)
        .with_temperature(temperature)
        .with_success_probability(p);
    match solve_bound(BoundKind::Classical, &query) {
        Ok(r) => Ok(ClassicalKeylength {
            bits: snapped_ceil(r.value),
            below_floor: false,
        }),
        Err(QlError::Infeasible { .. }) => Ok(ClassicalKeylength {
            bits: 0,
            below_floor: true,
        }),
        Err(e) => Err(e),
    }
}

/// Which of the two cosmic budget expressions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CosmicForm {
    /// `(4/3)π(c/(√Ω_Λ H_0))³ ρ_m c²` with the given matter density.
    FromDensity,
    /// `(1 − Ω_Λ)c⁵/(2 H_0 Ω_Λ^(3/2) G)`, matter density from `(1 − Ω_Λ)ρ_crit`.
    FromOmega,
}

impl CosmicForm {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "fromDensity" => Ok(CosmicForm::FromDensity),
            "fromOmega" => Ok(CosmicForm::FromOmega),
            _ => Err(QlError::Parse {
                token: text.to_string(),
                reason: "expected fromDensity or fromOmega".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosmologyParams {
    /// Hubble constant in 1/s.
    #[serde(rename = "H0_per_s")]
    pub h0: f64,
    pub omega_lambda: f64,
    /// Matter density in kg/m³.
    #[serde(rename = "rho_matter_kg_per_m3")]
    pub rho_matter: f64,
}

impl CosmologyParams {
    pub const PLANCK_H0_KM_S_MPC: f64 = 67.36;
    pub const PLANCK_OMEGA_LAMBDA: f64 = 0.6847;
    pub const PLANCK_RHO_MATTER: f64 = 2.69e-27;

    /// Takes the Hubble constant in km/s/Mpc.
    pub fn new(h0_km_s_mpc: f64, omega_lambda: f64, rho_matter: f64) -> Result<Self> {
        if !(h0_km_s_mpc.is_finite() && h0_km_s_mpc > 0.0) {
            return Err(QlError::domain("Hubble constant must be positive", h0_km_s_mpc));
        }
        if !(omega_lambda > 0.0 && omega_lambda < 1.0) {
            return Err(QlError::domain("dark-energy fraction must lie in (0, 1)", omega_lambda));
        }
        if !(rho_matter.is_finite() && rho_matter > 0.0) {
            return Err(QlError::domain("matter density must be positive", rho_matter));
        }
        Ok(CosmologyParams {
            h0: h0_km_s_mpc * 1e3 / MEGAPARSEC,
            omega_lambda,
            rho_matter,
        })
    }

    pub fn planck() -> Self {
        Self::new(
            Self::PLANCK_H0_KM_S_MPC,
            Self::PLANCK_OMEGA_LAMBDA,
            Self::PLANCK_RHO_MATTER,
        )
        .expect("reference parameters are valid")
    }

    pub fn critical_density(&self) -> f64 {
        3.0 * self.h0 * self.h0 / (8.0 * PI * G)
    }
}

/// Mass-energy inside the event horizon of a dark-energy dominated universe.
pub fn cosmic_energy(params: &CosmologyParams, form: CosmicForm) -> f64 {
    let l = params.omega_lambda;
    match form {
        CosmicForm::FromDensity => {
            let radius = C / (l.sqrt() * params.h0);
            4.0 / 3.0 * PI * radius.powi(3) * params.rho_matter * C * C
        }
        CosmicForm::FromOmega => (1.0 - l) * C.powi(5) / (2.0 * params.h0 * l.powf(1.5) * G),
    }
}

/// Total solar output over `duration`.
pub fn solar_budget(duration: Duration) -> f64 {
    SOLAR_LUMINOSITY * duration.seconds()
}

/// One row of the key-length comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeylengthReport {
    pub scenario: Scenario,
    /// Classical key length the scenario is conventionally paired with.
    pub classical_bits: Option<u32>,
    /// Classical key length obtained by inverting the classical bound.
    pub classical_solved: ClassicalKeylength,
    /// Whether the solved length is within one bit of `classical_bits`.
    pub classical_agrees: Option<bool>,
    pub quantum_bits: u32,
    pub bounds_used: Vec<String>,
}

impl KeylengthReport {
    pub fn for_scenario(s: &Scenario) -> Result<Self> {
        let t = s.duration.seconds();
        let classical_solved = classical_keylength(s.work, t, s.temperature, s.success_probability)?;
        let quantum_bits = equivalent_quantum_keylength(s.work, t, s.success_probability)?;
        Ok(KeylengthReport {
            scenario: s.clone(),
            classical_bits: s.classical_key_bits,
            classical_solved,
            classical_agrees: s.classical_key_bits.map(|b| b.abs_diff(classical_solved.bits) <= 1),
            quantum_bits,
            bounds_used: vec![
                BoundKind::Classical.formula_tag().to_string(),
                BoundKind::Quantum.formula_tag().to_string(),
            ],
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scenario": self.scenario.name,
            "work_J": self.scenario.work,
            "time_s": self.scenario.duration.seconds(),
            "temperature_K": self.scenario.temperature,
            "p_success": self.scenario.success_probability,
            "classical_bits": self.classical_bits,
            "classical_solved_bits": self.classical_solved.bits,
            "classical_below_floor": self.classical_solved.below_floor,
            "classical_agrees": self.classical_agrees,
            "quantum_bits": self.quantum_bits,
            "bounds_used": self.bounds_used,
            "constants_version": CONSTANTS_VERSION,
        })
    }
}

/// Key-length rows for several scenarios; a failing row does not stop the others.
pub fn build_report(scenarios: &[Scenario]) -> Vec<Result<KeylengthReport>> {
    scenarios.iter().map(KeylengthReport::for_scenario).collect()
}

pub const REPORT_CSV_HEADER: &str = "classical_bits,work_J,time_s,p_success,scenario,quantum_bits";

/// Table rows as CSV. Failed rows keep the scenario inputs and leave the
/// bit columns empty.
pub fn report_to_csv(scenarios: &[Scenario], rows: &[Result<KeylengthReport>]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for (s, row) in scenarios.iter().zip(rows) {
        let (classical, quantum) = match row {
            Ok(r) => (
                r.classical_bits.map(|b| b.to_string()).unwrap_or_default(),
                r.quantum_bits.to_string(),
            ),
            Err(_) => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            classical,
            fmt17(s.work),
            fmt17(s.duration.seconds()),
            fmt17(s.success_probability),
            s.name,
            quantum
        ));
    }
    out
}

/// Table rows as a JSON array; failed rows carry an `error` object.
pub fn report_to_json(scenarios: &[Scenario], rows: &[Result<KeylengthReport>]) -> Value {
    Value::Array(
        scenarios
            .iter()
            .zip(rows)
            .map(|(s, row)| match row {
                Ok(r) => r.to_json(),
                Err(e) => json!({
                    "scenario": s.name,
                    "error": {"kind": e.kind(), "message": e.to_string(), "offending_input": e.offending_input()},
                }),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::landauer_energy;
    use crate::constants::{H, JULIAN_YEAR};
    use crate::scenario::{scenario, SCENARIO_NAMES};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn table_quantum_column() {
        let a = |y: f64| y * JULIAN_YEAR;
        assert_eq!(equivalent_quantum_keylength(1e16, a(5.0), 1e-2).unwrap(), 394);
        assert_eq!(equivalent_quantum_keylength(8e43, a(5e9), 3e-11).unwrap(), 667);
        assert_eq!(equivalent_quantum_keylength(4.6e69, a(1e14), 1e-12).unwrap(), 872);
    }

    #[test]
    fn cosmic_limits() {
        let t = 1e14 * JULIAN_YEAR;
        assert_eq!(max_recoverable_keylength(4.62e69, t, 1e-12).unwrap(), 871);
        assert_eq!(max_deterministic_keylength(4.62e69, t).unwrap(), 830);
    }

    #[test]
    fn small_constructed_budgets() {
        let t = 1.0;
        assert_eq!(max_recoverable_keylength(3f64.sqrt() * HBAR / t, t, 1.0).unwrap(), 2);
        assert_eq!(max_deterministic_keylength(1.5 * PI * HBAR / t, t).unwrap(), 2);
        assert_eq!(max_deterministic_keylength(0.5 * PI * HBAR, 1.0).unwrap(), 0);
        let base = max_deterministic_keylength(1e30, 1e3).unwrap();
        let doubled = max_deterministic_keylength(2e30, 2e3).unwrap();
        assert!((3..=5).contains(&(doubled - base)));
    }

    #[test]
    fn classical_examples() {
        let dc = scenario("datacenter").unwrap();
        let bits = classical_keylength(dc.work, dc.duration.seconds(), 300.0, 1e-2).unwrap();
        assert!(bits.bits.abs_diff(128) <= 1, "{bits:?}");
        let dy = scenario("dyson").unwrap();
        let bits = classical_keylength(dy.work, dy.duration.seconds(), 2.7, 3e-11).unwrap();
        assert!(bits.bits.abs_diff(256) <= 1, "{bits:?}");
        let (t, temp) = (1.0, 300.0);
        let el = landauer_energy(temp);
        let w = 1024.0 * (el + H / (4.0 * t)) + 20.0 * el;
        assert_eq!(classical_keylength(w, t, temp, 1.0).unwrap().bits, 10);
        let tiny = classical_keylength(1e-40, 1.0, temp, 1.0).unwrap();
        assert_eq!(
            tiny,
            ClassicalKeylength {
                bits: 0,
                below_floor: true
            }
        );
    }

    #[test]
    fn cosmic_budget_forms() {
        let p = CosmologyParams::planck();
        let omega = cosmic_energy(&p, CosmicForm::FromOmega);
        assert!((omega / 4.62e69 - 1.0).abs() < 5e-3, "{omega:e}");
        let density = cosmic_energy(&p, CosmicForm::FromDensity);
        assert!((density / omega - 1.0).abs() < 0.02, "{density:e}");
        // The two forms coincide once ρ_m = (1 − Ω_Λ)ρ_crit.
        let implied = CosmologyParams {
            rho_matter: (1.0 - p.omega_lambda) * p.critical_density(),
            ..p
        };
        assert_relative_eq!(
            cosmic_energy(&implied, CosmicForm::FromDensity),
            omega,
            max_relative = 1e-12
        );
        let near_one = CosmologyParams::new(67.36, 1.0 - 1e-12, 1e-27).unwrap();
        assert!(cosmic_energy(&near_one, CosmicForm::FromOmega) < 1e-9 * omega);
        assert!(CosmologyParams::new(67.36, 1.0, 1e-27).is_err());
        assert!(CosmologyParams::new(-1.0, 0.5, 1e-27).is_err());
    }

    #[test]
    fn registry_report() {
        let scenarios: Vec<Scenario> = SCENARIO_NAMES.iter().map(|n| scenario(n).unwrap()).collect();
        let rows = build_report(&scenarios);
        let quantum: Vec<u32> = rows.iter().map(|r| r.as_ref().unwrap().quantum_bits).collect();
        assert_eq!(quantum, [394, 667, 872]);
        for r in rows.iter().flatten() {
            if let Some(c) = r.classical_bits {
                assert!(r.quantum_bits >= c);
                assert_eq!(r.classical_agrees, Some(true));
            }
        }
        let csv = report_to_csv(&scenarios, &rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(REPORT_CSV_HEADER));
        assert!(lines.next().unwrap().ends_with(",datacenter,394"));
        assert!(lines.last().unwrap().starts_with(",4.6"));
        assert_eq!(report_to_json(&scenarios, &rows)[0]["quantum_bits"], 394);
        assert!(build_report(&[]).is_empty());
    }

    #[test]
    fn custom_scenario_row() {
        let s = Scenario::new(
            "custom",
            1e6 * HBAR,
            Duration::from_seconds(1.0).unwrap(),
            0.0,
            1.0,
            None,
        )
        .unwrap();
        let row = KeylengthReport::for_scenario(&s).unwrap();
        assert_eq!(row.quantum_bits, 40);
    }

    #[test]
    fn secure_and_recoverable_sandwich() {
        for name in SCENARIO_NAMES {
            let s = scenario(name).unwrap();
            let t = s.duration.seconds();
            let n = equivalent_quantum_keylength(s.work, t, s.success_probability).unwrap();
            let need = |bits: u32| {
                let q = BoundQuery::new(Unknown::Work)
                    .with_n(bits as f64)
                    .with_time(t)
                    .with_success_probability(s.success_probability);
                solve_bound(BoundKind::Quantum, &q).unwrap().log2_value.unwrap()
            };
            assert!(need(n) > s.work.log2());
            assert!(need(n - 1) <= s.work.log2());
        }
    }

    proptest! {
        #[test]
        fn quantum_length_monotone(
            lw in -30.0f64..80.0, lt in -10.0f64..25.0, lp in -40.0f64..0.0,
            dw in 0.0f64..5.0, dt in 0.0f64..5.0, dp in 0.0f64..5.0,
        ) {
            let (w, t, p) = (10f64.powf(lw), 10f64.powf(lt), 10f64.powf(lp));
            let base = equivalent_quantum_keylength(w, t, p).unwrap();
            prop_assert!(equivalent_quantum_keylength(w * 10f64.powf(dw), t, p).unwrap() >= base);
            prop_assert!(equivalent_quantum_keylength(w, t * 10f64.powf(dt), p).unwrap() >= base);
            prop_assert!(equivalent_quantum_keylength(w, t, (p * 10f64.powf(dp)).min(1.0)).unwrap() <= base);
        }

        #[test]
        fn rounding_policy(lw in -30.0f64..80.0, lt in -10.0f64..25.0, lp in -40.0f64..0.0) {
            let (w, t, p) = (10f64.powf(lw), 10f64.powf(lt), 10f64.powf(lp));
            let secure = equivalent_quantum_keylength(w, t, p).unwrap();
            let recoverable = max_recoverable_keylength(w, t, p).unwrap();
            prop_assert!(secure == recoverable || secure == recoverable + 1);
        }

        #[test]
        fn deterministic_below_recoverable(lw in -30.0f64..80.0, lt in -10.0f64..25.0) {
            let (w, t) = (10f64.powf(lw), 10f64.powf(lt));
            prop_assert!(max_deterministic_keylength(w, t).unwrap() <= max_recoverable_keylength(w, t, 1.0).unwrap());
        }
    }
}
