//! First and second moments of `g(d)` and `T(d)` over `d <= x`.
//!
//! Besides the raw sums this module evaluates two rigorous finite-`x`
//! statements:
//!
//! * `Σ_{d<=x} g(d) = (4/3) ln 2 · x^{3/2} - 2x - 2 sqrt(x) + θ (x + 4 sqrt(x))`
//!   with `0 <= θ <= 1`; [`MomentReport::theta`] solves for `θ`.
//! * `Σ_{d<=x} g(d)^2 <= 11.9 x^2 + 5 x^{3/2} ln^2(4 e^4 x)`, and the same
//!   ceiling for `Σ T(d)^2` since `T <= g`.
//!
//! and the Markov step behind the count of large periods in `(x, 2x]`.

use rayon::prelude::*;
use serde::Serialize;

use crate::cf::cf_period;
use crate::gcount::{segments, sieve_into, DEFAULT_CHUNK};
use crate::{Error, Result};

/// Largest `x` accepted: `Σ g(d)^2 ≈ 1.22 x^2` must fit in `u64`.
pub const MAX_X: u64 = 2_000_000_000;

pub const CSV_HEADER: &str = "x,S1_g,S2_g,S1_T,S2_T,theta,S2g_over_x2";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub x: u64,
    pub s1_g: u64,
    pub s2_g: u64,
    pub s1_t: u64,
    pub s2_t: u64,
    pub theta: f64,
}

impl MomentReport {
    pub fn s2g_over_x2(&self) -> f64 {
        self.s2_g as f64 / (self.x as f64 * self.x as f64)
    }

    /// One CSV row matching [`CSV_HEADER`]. Integers are printed in full.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.12},{:.12}",
            self.x,
            self.s1_g,
            self.s2_g,
            self.s1_t,
            self.s2_t,
            self.theta,
            self.s2g_over_x2()
        )
    }
}

/// `θ` solving the first-moment identity for the observed `Σ g(d)`.
///
/// Double precision is enough: at `x = 10^9` the main term is about
/// `3·10^13`, so its rounding error is below `10^-2` while the bracket
/// `x + 4 sqrt(x)` exceeds `10^9`.
pub fn theta(x: u64, s1_g: u64) -> f64 {
    let xf = x as f64;
    let root = xf.sqrt();
    let main = 4.0 / 3.0 * std::f64::consts::LN_2 * xf * root - 2.0 * xf - 2.0 * root;
    (s1_g as f64 - main) / (xf + 4.0 * root)
}

/// `11.9 x^2 + 5 x^{3/2} ln^2(4 e^4 x)`.
pub fn bound_2_rhs(x: u64) -> f64 {
    let xf = x as f64;
    let log = 4f64.ln() + 4.0 + xf.ln();
    11.9 * xf * xf + 5.0 * xf * xf.sqrt() * log * log
}

fn check_x(x: u64) -> Result<()> {
    if x < 2 {
        return Err(Error::OutOfRange {
            x,
            reason: "need x >= 2",
        });
    }
    if x > MAX_X {
        return Err(Error::OutOfRange {
            x,
            reason: "second moment would overflow u64",
        });
    }
    Ok(())
}

#[derive(Default, Clone, Copy)]
struct Sums {
    s1_g: u64,
    s2_g: u64,
    s1_t: u64,
    s2_t: u64,
}

impl Sums {
    fn merge(self, o: Sums) -> Sums {
        Sums {
            s1_g: self.s1_g + o.s1_g,
            s2_g: self.s2_g + o.s2_g,
            s1_t: self.s1_t + o.s1_t,
            s2_t: self.s2_t + o.s2_t,
        }
    }
}

fn segment_sums(lo: u64, hi: u64) -> Result<Sums> {
    let mut counts = vec![0u32; (hi - lo) as usize];
    sieve_into(lo, hi, &mut counts);
    let mut s = Sums::default();
    for (d, &g) in (lo + 1..).zip(&counts) {
        let g = u64::from(g);
        let t = cf_period(d)?.period;
        s.s1_g += g;
        s.s2_g += g * g;
        s.s1_t += t;
        s.s2_t += t * t;
    }
    Ok(s)
}

/// Moments over `d <= x` with the default sieve chunk.
pub fn compute_moments(x: u64) -> Result<MomentReport> {
    compute_moments_chunked(x, DEFAULT_CHUNK)
}

/// Moments over `d <= x`, sieving `(0, x]` in pieces of `chunk`.
///
/// Perfect squares are included (with `T = 0` and their own `g`).
pub fn compute_moments_chunked(x: u64, chunk: u64) -> Result<MomentReport> {
    check_x(x)?;
    let pieces: Vec<(u64, u64)> = segments(0, x, chunk).collect();
    let parts = pieces
        .par_iter()
        .map(|&(lo, hi)| segment_sums(lo, hi))
        .collect::<Result<Vec<_>>>()?;
    let s = parts.into_iter().fold(Sums::default(), Sums::merge);
    Ok(MomentReport {
        x,
        s1_g: s.s1_g,
        s2_g: s.s2_g,
        s1_t: s.s1_t,
        s2_t: s.s2_t,
        theta: theta(x, s.s1_g),
    })
}

/// Both `Σ g^2` and `Σ T^2` lie under the second-moment ceiling.
pub fn check_bound_2(report: &MomentReport) -> bool {
    let rhs = bound_2_rhs(report.x);
    report.s2_g as f64 <= rhs && report.s2_t as f64 <= rhs
}

/// `T(d)` for `d` in `(lo, hi]`.
pub fn periods(lo: u64, hi: u64) -> Result<Vec<u64>> {
    (lo + 1..=hi)
        .into_par_iter()
        .map(|d| cf_period(d).map(|r| r.period))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DCount {
    pub x: u64,
    pub alpha: f64,
    /// `#{ d in (x, 2x] : T(d) > alpha sqrt(x) }`.
    pub count: u64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn count_above(periods: &[u64], x: u64, alpha: f64) -> u64 {
    let threshold = alpha * (x as f64).sqrt();
    periods.iter().filter(|&&t| t as f64 > threshold).count() as u64
}

pub fn count_d(x: u64, alpha: f64) -> Result<DCount> {
    check_x(x)?;
    check_alpha(alpha)?;
    let ts = periods(x, 2 * x)?;
    Ok(DCount {
        x,
        alpha,
        count: count_above(&ts, x, alpha),
    })
}

/// Both sides of `#D(x; α) · α^2 x <= Σ_{x<d<=2x} T(d)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovCheck {
    pub x: u64,
    pub alpha: f64,
    pub count: u64,
    pub lhs: f64,
    pub tail_s2_t: u64,
}

impl MarkovCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.tail_s2_t as f64
    }
}

pub fn markov_check(x: u64, alpha: f64) -> Result<MarkovCheck> {
    check_x(x)?;
    check_alpha(alpha)?;
    let ts = periods(x, 2 * x)?;
    let count = count_above(&ts, x, alpha);
    Ok(MarkovCheck {
        x,
        alpha,
        count,
        lhs: count as f64 * alpha * alpha * x as f64,
        tail_s2_t: ts.iter().map(|t| t * t).sum(),
    })
}

/// Every `d` counted in `D(x; α)` contributes more than `α^2 x` to `Σ T^2`.
pub fn chebyshev_check(x: u64, alpha: f64) -> Result<bool> {
    markov_check(x, alpha).map(|m| m.holds())
}
