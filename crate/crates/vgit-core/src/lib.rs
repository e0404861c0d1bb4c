//! Exact computation of variation-of-GIT stability data for pairs
//! `(X, H)` where `X` is a degree-`d` hypersurface and `H` a hyperplane
//! in projective `(n+1)`-space.
//!
//! Everything is computed over the rationals with no rounding anywhere:
//! fundamental one-parameter subgroups, the wall/chamber decomposition of
//! the stability parameter `t`, Hilbert-Mumford evaluations, centroid
//! (convex hull) stability tests, and the maximal destabilizing monomial
//! families together with their annihilators.

pub mod families;
pub mod fundamental;
pub mod io;
pub mod kernel;
pub mod monomial;
pub mod stability;

use num::BigRational;

/// Exact rational scalar used throughout. Always stored in lowest terms
/// with positive denominator (the backing type normalizes on every
/// construction).
pub type Rational = BigRational;

/// Arbitrary-precision integer re-export.
pub type BigInt = num::BigInt;

/// Library error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: dimension mismatches, empty sets, bad degrees.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Text-form parse failure with source position.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Shorthand result type.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
