use thiserror::Error;

use crate::fan::{Cone, FanViolation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the zero vector has no primitive representative")]
    ZeroVector,
    #[error("cone {0} is not a cone of the fan")]
    ConeNotInFan(Cone),
    #[error("fan is not complete")]
    NotComplete,
    #[error("sphere fanifold needs a fan of rank at least 1")]
    RankZero,
    #[error("invalid fan: {}", FanViolation::summarize(.0))]
    InvalidFan(Vec<FanViolation>),
    #[error("fan has no nonzero cone")]
    EmptyBoundary,
    #[error("fanifold is not closed")]
    NotClosed,
    #[error("stratum {0} is not adjacent to any 0-dimensional stratum")]
    NoAdjacentVertex(String),
    #[error("unknown stratum {0}")]
    UnknownStratum(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
