//! Named adversary budgets.

use serde::Serialize;

use crate::constants::T_CMB;
use crate::error::{QlError, Result};
use crate::units::Duration;

/// Work, time, bath temperature and acceptable success probability of an attack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    #[serde(rename = "work_J")]
    pub work: f64,
    #[serde(rename = "time_s")]
    pub duration: Duration,
    #[serde(rename = "temperature_K")]
    pub temperature: f64,
    #[serde(rename = "p_success")]
    pub success_probability: f64,
    /// Classical key length conventionally associated with this budget.
    pub classical_key_bits: Option<u32>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        work: f64,
        duration: Duration,
        temperature: f64,
        success_probability: f64,
        classical_key_bits: Option<u32>,
    ) -> Result<Self> {
        let name = name.into();
        if !(work.is_finite() && work > 0.0) {
            return Err(QlError::domain("scenario work must be positive", work));
        }
        if duration.seconds() <= 0.0 {
            return Err(QlError::domain("scenario duration must be positive", duration));
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(QlError::domain("temperature must be non-negative", temperature));
        }
        if !(success_probability > 0.0 && success_probability <= 1.0) {
            return Err(QlError::domain(
                "success probability must lie in (0, 1]",
                success_probability,
            ));
        }
        if classical_key_bits == Some(0) {
            return Err(QlError::domain("classical key bits must be positive", 0));
        }
        Ok(Scenario {
            name,
            work,
            duration,
            temperature,
            success_probability,
            classical_key_bits,
        })
    }
}

pub const SCENARIO_NAMES: [&str; 3] = ["datacenter", "dyson", "cosmic"];

/// Looks up one of the built-in scenarios.
pub fn scenario(name: &str) -> Result<Scenario> {
    let years = |y: f64| Duration::from_years(y).expect("registry durations are valid");
    match name {
        // 65 MW over 5 a is 1.026e16 J; the tabulated round figure is used.
        "datacenter" => Scenario::new(name, 1e16, years(5.0), 300.0, 1e-2, Some(128)),
        "dyson" => Scenario::new(name, 8e43, years(5e9), T_CMB, 3e-11, Some(256)),
        "cosmic" => Scenario::new(name, 4.6e69, years(1e14), T_CMB, 1e-12, None),
        _ => Err(QlError::UnknownScenario {
            name: name.to_string(),
            valid: SCENARIO_NAMES.iter().map(|s| s.to_string()).collect(),
        }),
    }
}

/// All built-in scenarios in table order.
pub fn scenarios() -> Vec<Scenario> {
    SCENARIO_NAMES
        .iter()
        .map(|n| scenario(n).expect("registry entries are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_matches_table_cells() {
        let d = scenario("datacenter").unwrap();
        assert_eq!((d.work, d.success_probability, d.temperature), (1e16, 1e-2, 300.0));
        assert_eq!(d.duration.seconds(), 5.0 * 3.155_76e7);
        assert_eq!(d.classical_key_bits, Some(128));

        let y = scenario("dyson").unwrap();
        assert_eq!((y.work, y.success_probability, y.temperature), (8e43, 3e-11, 2.7));
        assert_eq!(y.duration.seconds(), 5e9 * 3.155_76e7);
        assert_eq!(y.classical_key_bits, Some(256));

        let c = scenario("cosmic").unwrap();
        assert_eq!((c.work, c.success_probability), (4.6e69, 1e-12));
        assert_eq!(c.duration.seconds(), 1e14 * 3.155_76e7);
        assert_eq!(c.classical_key_bits, None);
    }

    #[test]
    fn unknown_name_lists_valid_ones() {
        let err = scenario("moon").unwrap_err();
        let msg = err.to_string();
        for n in SCENARIO_NAMES {
            assert!(msg.contains(n), "{msg}");
        }
        assert_eq!(err.kind(), "lookup");
    }

    #[test]
    fn constructor_checks_invariants() {
        let t = Duration::from_seconds(1.0).unwrap();
        assert!(Scenario::new("x", 0.0, t, 1.0, 0.5, None).is_err());
        assert!(Scenario::new("x", 1.0, t, -1.0, 0.5, None).is_err());
        assert!(Scenario::new("x", 1.0, t, 1.0, 0.0, None).is_err());
        assert!(Scenario::new("x", 1.0, t, 1.0, 1.5, None).is_err());
        assert!(Scenario::new("x", 1.0, Duration::from_seconds(0.0).unwrap(), 1.0, 1.0, None).is_err());
        assert!(Scenario::new("x", 1.0, t, 0.0, 1.0, None).is_ok());
    }
}
