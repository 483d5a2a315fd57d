//! Durations with the handful of unit suffixes used for adversary budgets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::JULIAN_YEAR;
use crate::error::{QlError, Result};

/// A non-negative span of time in seconds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Duration(f64);

impl Duration {
    pub fn from_seconds(seconds: f64) -> Result<Self> {
        if !seconds.is_finite() || seconds < 0.0 {
            return Err(QlError::range("duration must be finite and non-negative", seconds));
        }
        Ok(Duration(seconds))
    }

    pub fn from_years(years: f64) -> Result<Self> {
        Self::from_seconds(years * JULIAN_YEAR)
    }

    pub fn seconds(self) -> f64 {
        self.0
    }
}

// Longest suffixes first so "Ga" is not read as "a".
const SUFFIXES: [(&str, f64); 4] = [
    ("Ga", 1e9 * JULIAN_YEAR),
    ("Ta", 1e12 * JULIAN_YEAR),
    ("a", JULIAN_YEAR),
    ("s", 1.0),
];

/// Parses `"<decimal><unit>"` with unit one of `s`, `a` (Julian year), `Ga`, `Ta`.
pub fn parse_duration(text: &str) -> Result<Duration> {
    let text = text.trim();
    let (number, scale) = SUFFIXES
        .iter()
        .find_map(|(suffix, scale)| text.strip_suffix(suffix).map(|n| (n, *scale)))
        .ok_or_else(|| {
            let unit: String = text
                .chars()
                .rev()
                .take_while(|c| c.is_alphabetic())
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect();
            let (token, reason) = if unit.is_empty() {
                (
                    text.to_string(),
                    "missing unit suffix (expected s, a, Ga or Ta)".to_string(),
                )
            } else {
                (
                    unit.clone(),
                    format!("unknown unit suffix {unit:?} (expected s, a, Ga or Ta)"),
                )
            };
            QlError::Parse { token, reason }
        })?;

    let value = f64::from_str(number).map_err(|_| QlError::Parse {
        token: number.to_string(),
        reason: "not a decimal number".into(),
    })?;
    if !value.is_finite() {
        return Err(QlError::Parse {
            token: number.to_string(),
            reason: "duration must be finite".into(),
        });
    }
    if value < 0.0 {
        return Err(QlError::Parse {
            token: number.to_string(),
            reason: "duration must be non-negative".into(),
        });
    }
    Ok(Duration(value * scale))
}

/// Formats in seconds with the shortest representation that parses back exactly.
pub fn format_duration(duration: Duration) -> String {
    format!("{}s", duration.0)
}

impl FromStr for Duration {
    type Err = QlError;

    fn from_str(s: &str) -> Result<Self> {
        parse_duration(s)
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_duration(*self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_table_units() {
        assert_eq!(parse_duration("5a").unwrap().seconds(), 5.0 * 3.155_76e7);
        assert!((parse_duration("5a").unwrap().seconds() - 1.57788e8).abs() < 1e-6);
        assert_eq!(parse_duration("100Ta").unwrap().seconds(), 100.0 * 1e12 * 3.155_76e7);
        assert!((parse_duration("100Ta").unwrap().seconds() / 3.15576e21 - 1.0).abs() < 1e-15);
        assert_eq!(parse_duration("1.5s").unwrap().seconds(), 1.5);
        assert_eq!(parse_duration("5Ga").unwrap().seconds(), 5.0 * 1e9 * 3.155_76e7);
        assert_eq!(parse_duration("1e-9s").unwrap().seconds(), 1e-9);
    }

    #[test]
    fn rejects_bad_input_naming_the_token() {
        match parse_duration("5h") {
            Err(QlError::Parse { token, .. }) => assert_eq!(token, "h"),
            other => panic!("unexpected {other:?}"),
        }
        match parse_duration("abcs") {
            Err(QlError::Parse { token, .. }) => assert_eq!(token, "abc"),
            other => panic!("unexpected {other:?}"),
        }
        match parse_duration("-3a") {
            Err(QlError::Parse { token, .. }) => assert_eq!(token, "-3"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_duration("12").is_err());
        assert!(parse_duration("infs").is_err());
    }

    proptest! {
        #[test]
        fn format_round_trips(x in 0.0f64..1e300) {
            let d = Duration::from_seconds(x).unwrap();
            prop_assert_eq!(parse_duration(&format_duration(d)).unwrap(), d);
        }

        #[test]
        fn tiny_values_round_trip(e in -300i32..0, m in 1.0f64..10.0) {
            let d = Duration::from_seconds(m * 10f64.powi(e)).unwrap();
            prop_assert_eq!(parse_duration(&d.to_string()).unwrap(), d);
        }
    }
}
