use thiserror::Error;

/// Everything that can go wrong in this crate short of a caller-side bug.
///
/// Precondition violations that indicate misuse of pure arithmetic (e.g. a
/// degree bound below the actual degree) panic instead; the variants here are
/// for conditions a correct caller can hit with legitimate input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,

    #[error("polynomial degree must be at least {need}")]
    DegreeTooSmall { need: usize },

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("cannot factor zero")]
    ZeroInput,

    #[error("discriminant is zero (repeated factor); candidate primes are undefined")]
    ZeroDiscriminant,

    #[error("tolerance {0} is not a positive finite number")]
    InvalidTolerance(f64),

    #[error("tolerance {tol} is below what the precision policy can honor (minimum ~{limit:e})")]
    ToleranceTooTight { tol: f64, limit: f64 },

    #[error(
        "density enclosure straddles a rounding boundary: trials*lo = {scaled_lo}, trials*hi = {scaled_hi}"
    )]
    AmbiguousRounding {
        scaled_lo: String,
        scaled_hi: String,
    },

    #[error("work estimate {needed} exceeds the cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("invalid coefficient list: {0}")]
    InvalidPolyArg(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
