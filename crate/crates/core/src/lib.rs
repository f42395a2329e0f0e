//! Continued-fraction periods of `sqrt(d)` and the machinery around their
//! second moment.
//!
//! The crate is organised bottom-up:
//!
//! * [`cf`] expands `sqrt(d)` and returns the minimal period `T(d)`.
//! * [`gcount`] counts Hickerson's pairs `g(d)`, one value at a time or as a
//!   segmented sieve over `d`.
//! * [`moments`] aggregates `Σg`, `Σg²`, `ΣT`, `ΣT²` and the derived checks.
//! * [`wsum`] evaluates the second moment `W = Σ g(d)²` as an explicit
//!   quadruple sum, including the gcd / modular-inverse decomposition of the
//!   inner congruence.
//! * [`arith`] holds the multiplicative toolbox: `ρ(Δ)`, Gauss sums,
//!   `τ`, `φ`, `μ`, modular inverses and the sawtooth function.
//! * [`squad`] integrates the four-dimensional limit integral by Monte Carlo.

pub mod arith;
pub mod cf;
mod error;
pub mod gcount;
pub mod moments;
pub mod squad;
pub mod wsum;

pub use error::{Error, Result};
