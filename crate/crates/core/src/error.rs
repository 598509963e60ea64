use thiserror::Error;

/// Errors raised by the poset, lattice, forest, divisor and gluing layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation is not antisymmetric: {0} and {1} lie in a cycle")]
    Cycle(String, String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("size limit exceeded: {what} has {size} elements, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("subset is not interval closed")]
    NotIntervalClosed,
    #[error("elements are not comparable")]
    NotComparable,
    #[error("lattice is not distributive: {0}")]
    NonDistributive(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid proximity at node `{node}`: {reason}")]
    InvalidProximity { node: String, reason: String },
    #[error("subset is not a lower ideal: `{0}` is contracted but a component below it is not")]
    NotLowerIdeal(String),
    #[error("contractions belong to different forests")]
    ForestMismatch,
    #[error("`{0}` is not a root of the forest")]
    UnknownRoot(String),
    #[error("class is not relatively ample: {0}")]
    NotAmple(String),
    #[error("component `{0}` is not minimal in the contracted ideal")]
    NotMinimal(String),
    #[error("t-structure has no shift for slot `{0}`")]
    MissingSlot(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
