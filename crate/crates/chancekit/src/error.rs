//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series expansion undefined: denominator vanishes at the origin")]
    PoleAtOrigin,
    #[error("evaluation point is a pole")]
    PoleAtEvaluation,
    #[error("need more terms: {required} required, {got} supplied")]
    NeedMoreTerms { required: usize, got: usize },
    #[error("nothing to eliminate: both inputs have degree 0 in the eliminated variable")]
    NothingToEliminate,
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("invalid die: {0}")]
    InvalidDie(String),
    #[error("absorbing state unreachable from state {0}")]
    UnreachableAbsorbing(usize),
    #[error("outside closed-form domain (2k = n at k = {k}, n = {n})")]
    OutsideClosedFormDomain { k: i64, n: i64 },
    #[error("moment is infinite or undefined: {0}")]
    InfiniteMoment(String),
    #[error("elimination degenerated: {0}")]
    EliminationDegenerate(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("iteration cap {cap} exceeded: {context}")]
    CapExceeded { cap: usize, context: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
