use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the floorset library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponent `{input}`: {reason}")]
    InvalidExponent { input: String, reason: String },

    #[error("exponent must be greater than 1, got {0}")]
    ExponentNotAboveOne(String),

    #[error("X = {got} is below the minimum {min} for this operation")]
    XTooSmall { got: u64, min: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {p} exceeds X = {x}")]
    PrimeExceedsX { p: u64, x: u64 },

    #[error(
        "no critical point: f'(y) {target:+} has no sign change on [1, {x}] \
         (g(1) = {g_lo}, g(X) = {g_hi})"
    )]
    NoCriticalPoint { x: f64, target: f64, g_lo: f64, g_hi: f64 },

    #[error("X = {x} exceeds the enumeration cap {cap}")]
    CapExceeded { x: u64, cap: u64 },

    #[error("unknown preset `{0}` (expected hyperbola-t, circle, parabola or sqrt)")]
    UnknownPreset(String),

    #[error("preset `{0}` requires an exponent t")]
    MissingExponent(&'static str),

    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    #[error("sieve cache {path}: {reason}")]
    SieveCache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
