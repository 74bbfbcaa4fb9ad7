use thiserror::Error;

/// Errors raised by the form, ideal and class-group layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(String),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(String),

    #[error("form ({a}, {b}, {c}) is not primitive positive definite")]
    InvalidForm { a: String, b: String, c: String },

    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(String),

    #[error("discriminant mismatch: form has {form}, field has {field}")]
    DiscriminantMismatch { form: String, field: String },

    #[error("leading coefficient {a} is not prime to N = {n}")]
    NotPrimeToLevel { a: String, n: String },

    #[error("gcd(u, v, N) = gcd({u}, {v}, {n}) is not 1")]
    RowNotPrimitive { u: String, v: String, n: String },

    #[error("invalid residue subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("the zero ideal is not invertible")]
    ZeroIdeal,

    #[error("precision exhausted: residual {residual:e} at {bits} bits")]
    PrecisionExhausted { bits: u32, residual: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
