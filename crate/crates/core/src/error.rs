use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a permutation of [{m}]: {reason}")]
    InvalidPermutation { m: usize, reason: String },

    #[error("degree {0} exceeds the supported ceiling of {max}", max = crate::perm::MAX_DEGREE)]
    DegreeTooLarge(usize),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("alpha too coarse: {alpha} repeats a fractional part among 1..={m} multiples")]
    AlphaTooCoarse { m: usize, alpha: String },

    #[error("not invertible: gcd({a}, {m}) != 1")]
    NotInvertible { a: i64, m: usize },

    #[error(
        "refusing brute-force enumeration at m = {m} (limit {limit}); raise the limit or force it"
    )]
    SizeGuard { m: usize, limit: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cannot parse {kind} from {token:?}: {reason}")]
    Parse {
        kind: &'static str,
        token: String,
        reason: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
