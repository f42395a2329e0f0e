use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("d must be at least 1")]
    ZeroDiscriminant,

    #[error("continued fraction of sqrt({d}) did not close within {cap} steps")]
    IterationCap { d: u64, cap: u64 },

    #[error("invalid segment ({lo}, {hi}]: need lo < hi")]
    InvalidSegment { lo: u64, hi: u64 },

    #[error("x = {x} is out of range: {reason}")]
    OutOfRange { x: u64, reason: &'static str },

    #[error("{a} is not invertible modulo {n}")]
    NotCoprime { a: i64, n: u64 },

    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),

    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("v1 and v2 must be positive, got ({v1}, {v2})")]
    NonPositiveV { v1: f64, v2: f64 },

    #[error("point ({u1}, {u2}, {v1}, {v2}) lies outside the integration box")]
    OutsideDomain { u1: f64, u2: f64, v1: f64, v2: f64 },

    #[error("cutoff eps must satisfy 0 <= eps < 1, got {0}")]
    InvalidEps(f64),

    #[error("sample count must be positive")]
    NoSamples,
}
