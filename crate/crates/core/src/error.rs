use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial needs at least one coefficient")]
    EmptyPolynomial,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has no roots (degree 0)")]
    ConstantPolynomial,
    #[error("degree {degree} exceeds inverse order {n}")]
    DegreeExceedsInverseOrder { degree: usize, n: usize },
    #[error("cycle length must be at least 1, got {0}")]
    InvalidCycleLength(usize),
    #[error("order must be at least 1, got {0}")]
    InvalidOrder(usize),
    #[error("root finder did not converge: {0}")]
    RootFinderFailed(String),
    #[error("stability methods disagree: {0}")]
    MethodDisagreement(String),
    #[error("multiplier must be nonzero")]
    ZeroMultiplier,
    #[error("invalid averaging set: {0}")]
    InvalidDesign(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("multiplier {mu} is not strictly inside S_{n}")]
    NotInStabilizationDomain { mu: String, n: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no verified design within max_order = {0}")]
    DesignNotFound(usize),
    #[error("cycle length {period} does not match design cycle length {design}")]
    PeriodMismatch { period: usize, design: usize },
    #[error("trajectory has not converged")]
    NotConverged,
    #[error("tail too short for a rate fit: {0} samples, need {1}")]
    InsufficientTail(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
