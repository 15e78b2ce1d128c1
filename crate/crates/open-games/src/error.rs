use thiserror::Error;

/// Errors raised by the engine. Every constructor and operation validates its
/// typing preconditions eagerly, so a `TypeMismatch` names the offending wire
/// rather than surfacing later as a wrong probability.
#[derive(Debug, Error)]
pub enum Error {
    /// A value was used outside the space it was declared against.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two wires that must carry the same space carry different ones.
    #[error("type mismatch on {wire}: {detail}")]
    TypeMismatch { wire: String, detail: String },

    /// Distribution construction from invalid raw weights.
    #[error("construction error: {0}")]
    Construction(String),

    /// Conditioning on an observation of probability zero.
    #[error("conditioning error: observation {0} has zero marginal probability")]
    ZeroProbabilityObservation(String),

    /// A strategy profile whose shape does not match the game tree.
    #[error("structural error at {path}: {detail}")]
    Structure { path: String, detail: String },

    /// Enumeration would exceed the candidate-profile budget.
    #[error("resource budget exceeded: {candidates} candidate profiles (budget {budget})")]
    BudgetExceeded { candidates: u128, budget: u128 },

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),

    /// Well-formed input that violates a documented file invariant.
    #[error("validation error at {path}: {detail}")]
    Validation { path: String, detail: String },

    /// The two equilibrium engines disagreed. This is a bug, never expected.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn mismatch(wire: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::TypeMismatch {
            wire: wire.into(),
            detail: detail.into(),
        }
    }

    pub fn structure(path: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Structure {
            path: path.into(),
            detail: detail.into(),
        }
    }

    pub fn validation(path: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            detail: detail.into(),
        }
    }
}
