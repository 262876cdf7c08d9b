use thiserror::Error;

/// Errors raised by the algebraic routines.
///
/// Variants carry enough context to be printed directly by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: i64, have: i64 },
    #[error("division by a series indistinguishable from zero (precision {0})")]
    ZeroDivisor(i64),
    #[error("not a basis")]
    NotABasis,
    #[error("rank deficiency: rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("polynomial is not irreducible over Q: {0}")]
    Reducible(String),
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("inconsistent: {0}")]
    Inconsistent(String),
    #[error("F not squarefree")]
    NotSquarefree,
    #[error("Euler inconsistency at {0}")]
    EulerInconsistency(u64),
    #[error("invalid character data: {0}")]
    Character(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("constraint violation: {0}")]
    Constraint(String),
    #[error("not hyperelliptic of this level: {0}")]
    NotHyperelliptic(String),
    #[error("a2n contradiction: {0}")]
    A2nContradiction(String),
    #[error("no consistent e-th power structure: {0}")]
    NoPowerStructure(String),
    #[error("bad point: {0}")]
    BadPoint(String),
    #[error("genus < 2")]
    GenusTooSmall,
    #[error("x-series mismatch at exponent {0}")]
    XMismatch(i64),
    #[error("indistinguishable trace sequences at available precision")]
    Indistinguishable,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
