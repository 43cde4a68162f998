use std::fmt;

use thiserror::Error;

/// A parse failure with the character offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl fmt::Display) -> Self {
        ParseError { position, message: message.to_string() }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("groupoid must be nonempty")]
    EmptyGroupoid,
    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),
    #[error("pair groupoid needs at least one point")]
    EmptyPairGroupoid,
    #[error("symmetric group degree must be between 1 and {max}, got {degree}")]
    SymmetricDegree { degree: usize, max: usize },
    #[error("malformed groupoid description: {0}")]
    Malformed(String),
    #[error("groupoid fails validation: {0}")]
    Invalid(String),
    #[error("elements belong to different groupoids (dimension {left} vs {right})")]
    GroupoidMismatch { left: usize, right: usize },
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("arrow set {0} is not a full bisection")]
    NotFullBisection(String),
    #[error("enumeration too large: {what} has {size} elements, cap is {cap}")]
    EnumerationTooLarge { what: &'static str, size: String, cap: usize },
    #[error("pi is injective for this groupoid, so no kernel witness exists (injectivity criterion holds: {0})")]
    InjectiveNoWitness(String),
    #[error("arrows {0} and {1} do not satisfy the witness selection condition")]
    BadWitnessPair(String, String),
    #[error("{0}")]
    Precondition(String),
    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
