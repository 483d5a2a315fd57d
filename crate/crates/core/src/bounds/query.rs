use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constants::CONSTANTS_VERSION;
use crate::error::{QlError, Result};

/// Which quantity a [`BoundQuery`] solves for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unknown {
    #[serde(rename = "work")]
    Work,
    #[serde(rename = "time")]
    Time,
    #[serde(rename = "psuccess")]
    SuccessProbability,
    #[serde(rename = "n")]
    Bits,
}

impl Unknown {
    pub fn unit(self) -> &'static str {
        match self {
            Unknown::Work => "J",
            Unknown::Time => "s",
            Unknown::SuccessProbability => "1",
            Unknown::Bits => "bit",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "work" => Ok(Unknown::Work),
            "time" => Ok(Unknown::Time),
            "psuccess" => Ok(Unknown::SuccessProbability),
            "n" => Ok(Unknown::Bits),
            _ => Err(QlError::Parse {
                token: text.to_string(),
                reason: "expected one of work, time, psuccess, n".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Classical,
    Quantum,
    Gate,
    Ballistic,
    Bht,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Classical => "classical",
            BoundKind::Quantum => "quantum",
            BoundKind::Gate => "gate",
            BoundKind::Ballistic => "ballistic",
            BoundKind::Bht => "bht",
        }
    }

    pub fn formula_tag(self) -> &'static str {
        match self {
            BoundKind::Classical => "classical exhaustive search: W >= 2^n P_s (k_B T ln2 + h/(4t)) + 2n k_B T ln2",
            BoundKind::Quantum => {
                "fundamental quantum search: W >= sqrt(2^n P_s - 1) hbar/t; vacuous for P_s <= 2^-n \
                 (a stated offset at P_s = 2^-n/2 is read as a typo for 2^-n)"
            }
            BoundKind::Gate => {
                "gate-based Grover: W >= (2n + K) k_B T ln2 + hbar (sqrt(P_s 2^n) - 1)(pi - 2^(1-n/2))/t"
            }
            BoundKind::Ballistic => {
                "ballistic evolution: P_s = 2^-n + (1 - 2^-n) sin^2(W t/((2^(n/2) + 1) hbar)), 0 <= t <= t_F"
            }
            BoundKind::Bht => "collision search: W >= k(n+1) k_B T ln2 + k h/(4t) + sqrt(2^n P_s/k - 1) hbar/t",
        }
    }
}

/// Conditions attached to a bound value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFlag {
    /// `2^n P_s <= 1`: random guessing already succeeds, the dynamic term is zero.
    OffsetRegime,
    /// The solved probability exceeded one and was capped.
    Saturated,
    /// The requirement does not depend on the unknown time.
    TimeUnconstrained,
}

/// `(n, W, t, T, P_s)` with one field marked as the unknown.
///
/// A power may stand in for the work: with a time given it means
/// `W = P·t`; when solving for time it fixes `W(t) = P·t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(default, rename = "work_J", skip_serializing_if = "Option::is_none")]
    pub work: Option<f64>,
    #[serde(default, rename = "power_W", skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
    #[serde(default, rename = "time_s", skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(default, rename = "temperature_K", skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, rename = "p_success", skip_serializing_if = "Option::is_none")]
    pub success_probability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected_errors: Option<u32>,
    pub unknown: Unknown,
}

impl BoundQuery {
    pub fn new(unknown: Unknown) -> Self {
        BoundQuery {
            n: None,
            work: None,
            power: None,
            time: None,
            temperature: None,
            success_probability: None,
            corrected_errors: None,
            unknown,
        }
    }

    pub fn with_n(mut self, n: f64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_work(mut self, work: f64) -> Self {
        self.work = Some(work);
        self
    }

    pub fn with_power(mut self, power: f64) -> Self {
        self.power = Some(power);
        self
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = Some(time);
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = Some(temperature);
        self
    }

    pub fn with_success_probability(mut self, p: f64) -> Self {
        self.success_probability = Some(p);
        self
    }

    pub fn with_corrected_errors(mut self, k: u32) -> Self {
        self.corrected_errors = Some(k);
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let positive = [("work", self.work), ("power", self.power), ("time", self.time)];
        for (name, v) in positive {
            if let Some(x) = v {
                if !(x.is_finite() && x > 0.0) {
                    return Err(QlError::domain(format!("{name} must be positive and finite"), x));
                }
            }
        }
        if let Some(n) = self.n {
            if !(n.is_finite() && n >= 0.0) {
                return Err(QlError::domain("n must be non-negative", n));
            }
        }
        if let Some(t) = self.temperature {
            if !(t.is_finite() && t >= 0.0) {
                return Err(QlError::domain("temperature must be non-negative", t));
            }
        }
        if let Some(p) = self.success_probability {
            if !(0.0..=1.0).contains(&p) {
                return Err(QlError::domain("success probability must lie in [0, 1]", p));
            }
        }
        if self.work.is_some() && self.power.is_some() {
            return Err(QlError::domain("give either work or power, not both", "work, power"));
        }
        Ok(())
    }

    pub(crate) fn require(&self, name: &str, value: Option<f64>) -> Result<f64> {
        value.ok_or_else(|| QlError::domain(format!("missing input {name}"), name))
    }

    /// Work budget, taking `power·time` when only a power is given.
    pub(crate) fn budget(&self) -> Result<f64> {
        match (self.work, self.power, self.time) {
            (Some(w), _, _) => Ok(w),
            (None, Some(p), Some(t)) => Ok(p * t),
            _ => Err(QlError::domain("missing input work (or power with time)", "work")),
        }
    }
}

/// A solved bound together with the query that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub value: f64,
    /// `log2(value)`, reported for work values that may not fit a double.
    pub log2_value: Option<f64>,
    pub bound_kind: BoundKind,
    pub formula_tag: String,
    pub inputs: BoundQuery,
    pub unit: &'static str,
    pub flags: Vec<BoundFlag>,
}

impl BoundResult {
    pub fn has_flag(&self, flag: BoundFlag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "bound_kind": self.bound_kind,
            "formula_tag": self.formula_tag,
            "inputs": self.inputs,
            "value": self.value,
            "unit": self.unit,
            "flags": self.flags,
            "constants_version": CONSTANTS_VERSION,
        });
        if let Some(l) = self.log2_value {
            v["log2_value"] = json!(l);
        }
        v
    }
}
