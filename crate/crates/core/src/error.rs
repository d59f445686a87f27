use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("coordinate {0} outside [-2^26, 2^26]")]
    CoordinateOutOfRange(i64),
    #[error("empty point set")]
    EmptyInput,
    #[error("vertical slopes have no finite extreme direction")]
    VerticalSlope,
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("state space exceeded {0} states")]
    Explosion(usize),
    #[error("output differs from the oracle: {0}")]
    Verification(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
