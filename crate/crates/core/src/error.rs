use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("k must be odd and positive, got {0}")]
    EvenOrZeroK(u64),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),

    #[error("invalid curve {0}")]
    InvalidCurve(String),

    #[error("curve boundary traced into {0} cycles, expected one")]
    DisconnectedCurve(usize),

    #[error("genus parity mismatch: 2 - chi - b = {0} is odd")]
    GenusParity(i64),

    #[error("vertex {0} is not shared by both curves")]
    VertexNotShared(usize),

    #[error("identical curves have no distinguishing vertex")]
    IdenticalCurves,

    #[error("numeric evaluation undecided: {0}")]
    Undecided(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, Error>;
