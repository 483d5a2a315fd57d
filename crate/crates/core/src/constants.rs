//! Physical constants shared by every bound and solver.
//!
//! Values are CODATA 2018 (exact SI-defining constants where available).
//! The reduced Planck constant is derived from `h` so that `h = 2π·ħ`
//! holds to machine precision.

use std::f64::consts::PI;

use serde::Serialize;
use serde_json::json;

/// Identifier of the constant set, carried by every serialized result.
pub const CONSTANTS_VERSION: &str = "codata-2018/planck-2018/v1";

/// Planck constant, J·s (exact).
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light, m/s (exact).
pub const C: f64 = 2.997_924_58e8;
/// Newtonian gravitational constant, m³/(kg·s²).
pub const G: f64 = 6.674_30e-11;
/// One megaparsec in metres.
pub const MEGAPARSEC: f64 = 3.085_677_581_491_367e22;
/// Julian year (365.25 d) in seconds.
pub const JULIAN_YEAR: f64 = 3.155_76e7;
/// Nominal solar luminosity, W.
pub const SOLAR_LUMINOSITY: f64 = 3.828e26;
/// Cosmic microwave background temperature used as a cold bath, K.
pub const T_CMB: f64 = 2.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub h: f64,
    pub k_b: f64,
    pub c: f64,
    pub g: f64,
    pub megaparsec: f64,
    pub julian_year: f64,
    pub solar_luminosity: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    h: H,
    k_b: K_B,
    c: C,
    g: G,
    megaparsec: MEGAPARSEC,
    julian_year: JULIAN_YEAR,
    solar_luminosity: SOLAR_LUMINOSITY,
};

impl PhysicalConstants {
    fn values(&self) -> [(&'static str, f64); 8] {
        [
            ("hbar", self.hbar),
            ("h", self.h),
            ("k_b", self.k_b),
            ("c", self.c),
            ("g", self.g),
            ("megaparsec", self.megaparsec),
            ("julian_year", self.julian_year),
            ("solar_luminosity", self.solar_luminosity),
        ]
    }

    /// Checks positivity and the `h = 2π·ħ` relation.
    pub fn is_consistent(&self) -> bool {
        self.values().iter().all(|(_, v)| v.is_finite() && *v > 0.0)
            && ((self.h - 2.0 * PI * self.hbar) / self.h).abs() <= 1e-12
    }

    /// Machine-readable table: `{"constants_version": ..., "constants": {name: {value, unit}}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let units = ["J s", "J s", "J/K", "m/s", "m^3/(kg s^2)", "m", "s", "W"];
        let table: serde_json::Map<_, _> = self
            .values()
            .iter()
            .zip(units)
            .map(|((name, value), unit)| (name.to_string(), json!({"value": value, "unit": unit})))
            .collect();
        json!({
            "constants_version": CONSTANTS_VERSION,
            "constants": table,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codata_set_is_consistent() {
        assert!(CODATA_2018.is_consistent());
        assert!((HBAR - 1.054_571_817e-34).abs() / HBAR < 1e-9);
    }

    #[test]
    fn json_table_is_versioned() {
        let v = CODATA_2018.to_json();
        assert_eq!(v["constants_version"], CONSTANTS_VERSION);
        assert_eq!(v["constants"]["k_b"]["value"], K_B);
        assert_eq!(v["constants"].as_object().unwrap().len(), 8);
    }

    #[test]
    fn broken_set_is_rejected() {
        let mut bad = CODATA_2018;
        bad.hbar *= 1.0 + 1e-9;
        assert!(!bad.is_consistent());
        let mut neg = CODATA_2018;
        neg.c = -1.0;
        assert!(!neg.is_consistent());
    }
}
