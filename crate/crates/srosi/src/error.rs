use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("kernel weights have zero total mass")]
    NoMass,
    #[error("unsupported norm: {0}")]
    UnsupportedNorm(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("inner recourse problem is infeasible at stage {stage}")]
    InnerInfeasible { stage: usize },
    #[error("inner recourse problem is unbounded at stage {stage}")]
    InnerUnbounded { stage: usize },
    #[error("linear program ended with status {0:?}")]
    Lp(crate::lp::LpStatus),
    #[error("invalid linear program: {0}")]
    InvalidModel(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
