use thiserror::Error;

/// Errors raised by the arithmetic, form and reconciliation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    Zero,

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("discriminant {d} is excluded for ell = {ell}")]
    Excluded { ell: u64, d: i64 },

    #[error("discriminant {0} is degenerate (zero, square, or not 0/1 mod 4)")]
    DegenerateDiscriminant(i64),

    #[error("forms have different discriminants ({0} vs {1})")]
    DiscriminantMismatch(i64, i64),

    #[error("form {0:?} is not positive definite")]
    NotPositiveDefinite((i64, i64, i64)),

    #[error("cubic form {0:?} is reducible")]
    Reducible((i64, i64, i64, i64)),

    #[error("signature r2 = {r2} is impossible in degree {degree}")]
    InvalidSignature { degree: u32, r2: u32 },

    #[error("field discriminant is not the discriminant of a mirror field for ell = {ell}")]
    NotMirrorShape { ell: u64 },

    #[error("conductor exponent {k} is not admissible for ell = {ell}, D = {d}")]
    NotAdmissible { ell: u64, d: i64, k: u32 },

    #[error("discriminant {0} lies outside the tabulated range")]
    OutOfRange(i64),

    #[error("tabulations cannot be merged: ranges are not adjacent or signs differ")]
    IncompatibleShards,

    #[error("tabulation does not cover discriminants needed for D = {0}")]
    InsufficientRange(i64),

    #[error("line {line}: {message}")]
    TableParse { line: u64, message: String },

    #[error("table entry {label} has degree {found}, expected {expected}")]
    DegreeMismatch {
        label: String,
        expected: u32,
        found: u32,
    },

    #[error("arithmetic overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
