use thiserror::Error;

use crate::seq_model::SpaceKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cycle must be nonempty")]
    EmptyCycle,

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{op} does not accept sequences of kind {kind}")]
    WrongKind { op: &'static str, kind: SpaceKind },

    #[error("invalid sequence description: {0}")]
    InvalidSequence(String),

    #[error("precondition violated in {op}: {detail}")]
    Precondition { op: &'static str, detail: String },

    #[error("point set is empty")]
    EmptySet,

    #[error("horizon {got} too short, need at least {needed}")]
    HorizonTooShort { needed: usize, got: usize },

    #[error("truncated {quantity} did not stabilize ({first} vs {second})")]
    NotStabilized {
        quantity: &'static str,
        first: String,
        second: String,
    },

    #[error("internal invariant broken in {op}: {detail}")]
    Invariant { op: &'static str, detail: String },

    #[error("{what} bound violated: slack {slack:e}")]
    BoundViolated { what: &'static str, slack: f64 },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("instance format: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn precondition(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn invariant(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            op,
            detail: detail.into(),
        }
    }
}
