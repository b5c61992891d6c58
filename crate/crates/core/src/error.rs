use thiserror::Error;

#[derive(Debug, Error)]
pub enum QemError {
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("operator produced a non-real Pauli transfer matrix (residue {0:.3e})")]
    NonRealPtm(f64),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error("not a probability vector: {0}")]
    InvalidProbability(String),
    #[error("channel is singular or nearly singular")]
    SingularChannel,
    #[error("linear system is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("residual too large after solve: {0:.3e}")]
    ResidualTooLarge(f64),
    #[error("unsupported qubit count: {0}")]
    UnsupportedQubitCount(usize),
    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
}

pub type Result<T> = std::result::Result<T, QemError>;
