use thiserror::Error;

/// Errors raised by the solvers, simulators and parsers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QlError {
    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: String },

    #[error("unknown scenario {name:?} (valid: {})", valid.join(", "))]
    UnknownScenario { name: String, valid: Vec<String> },

    #[error("domain error: {message}")]
    Domain { message: String, input: String },

    #[error("infeasible: {message} (floor {floor:e})")]
    Infeasible { message: String, floor: f64 },

    #[error("out of range: {message}")]
    Range { message: String, input: String },

    #[error("capacity exceeded: {message}")]
    Capacity { message: String },

    #[error("norm drift {drift:e} at t = {time:e} s exceeds tolerance")]
    NormDrift { drift: f64, time: f64 },
}

impl QlError {
    pub fn domain(message: impl Into<String>, input: impl ToString) -> Self {
        QlError::Domain {
            message: message.into(),
            input: input.to_string(),
        }
    }

    pub fn range(message: impl Into<String>, input: impl ToString) -> Self {
        QlError::Range {
            message: message.into(),
            input: input.to_string(),
        }
    }

    /// Short machine-readable category, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            QlError::Parse { .. } => "parse",
            QlError::UnknownScenario { .. } => "lookup",
            QlError::Domain { .. } => "domain",
            QlError::Infeasible { .. } => "infeasible",
            QlError::Range { .. } => "range",
            QlError::Capacity { .. } => "capacity",
            QlError::NormDrift { .. } => "internal-consistency",
        }
    }

    /// The input value that triggered the error, when one can be named.
    pub fn offending_input(&self) -> Option<String> {
        match self {
            QlError::Parse { token, .. } => Some(token.clone()),
            QlError::UnknownScenario { name, .. } => Some(name.clone()),
            QlError::Domain { input, .. } | QlError::Range { input, .. } => Some(input.clone()),
            QlError::Infeasible { floor, .. } => Some(format!("{floor:e}")),
            QlError::Capacity { .. } | QlError::NormDrift { .. } => None,
        }
    }
}

pub type Result<T, E = QlError> = std::result::Result<T, E>;
