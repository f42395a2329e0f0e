//! Simple continued fraction of `sqrt(d)` and its minimal period.
//!
//! For non-square `d` with `a0 = floor(sqrt(d))` the complete quotients are
//! `(sqrt(d) + P_k) / Q_k` with
//!
//! ```text
//! P_1 = a0,                 Q_1 = d - a0^2
//! a_k = floor((a0 + P_k) / Q_k)
//! P_{k+1} = a_k Q_k - P_k,  Q_{k+1} = (d - P_{k+1}^2) / Q_k
//! ```
//!
//! The expansion is purely periodic from `k = 1` and the period closes at the
//! first `k >= 1` with `Q_k = 1`.

use serde::Serialize;

use crate::{Error, Result};

/// `floor(sqrt(n))`, exact for every `u64`.
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

/// Returns `Some(r)` when `n = r^2`.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// One state of the surd recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurdStep {
    pub p: u64,
    pub q: u64,
    /// Partial quotient `a_k = floor((a0 + P_k) / Q_k)`.
    pub a: u64,
}

/// Iterator over the states `(P_k, Q_k, a_k)` for `k = 1, 2, ...`.
///
/// Never terminates on its own; callers stop at `Q_k = 1` or after a fixed
/// number of steps.
#[derive(Debug, Clone)]
pub struct SurdSteps {
    d: u64,
    a0: u64,
    p: u64,
    q: u64,
}

impl SurdSteps {
    /// Returns `None` when `d` is zero or a perfect square.
    pub fn new(d: u64) -> Option<Self> {
        let a0 = isqrt(d);
        if d == 0 || a0 * a0 == d {
            return None;
        }
        Some(Self {
            d,
            a0,
            p: a0,
            q: d - a0 * a0,
        })
    }

    pub fn a0(&self) -> u64 {
        self.a0
    }
}

impl Iterator for SurdSteps {
    type Item = SurdStep;

    fn next(&mut self) -> Option<SurdStep> {
        let (p, q) = (self.p, self.q);
        let a = (self.a0 + p) / q;
        let next_p = a * q - p;
        // next_p <= a0, so the square never exceeds d; the 128-bit product keeps
        // that an assertion rather than an overflow.
        let sq = u128::from(next_p) * u128::from(next_p);
        debug_assert!(sq <= u128::from(self.d));
        let num = self.d - sq as u64;
        debug_assert_eq!(num % q, 0, "Q_k must divide d - P_(k+1)^2");
        self.p = next_p;
        self.q = num / q;
        Some(SurdStep { p, q, a })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodResult {
    pub d: u64,
    /// Minimal period `T(d)`; zero for perfect squares.
    pub period: u64,
    pub a0: u64,
}

impl PeriodResult {
    pub fn is_square(&self) -> bool {
        self.period == 0
    }
}

fn iteration_cap(d: u64, a0: u64) -> u64 {
    // T(d) = O(sqrt(d) log d); bits(d) + 2 comfortably dominates 0.72 ln d.
    let bits = u64::from(u64::BITS - d.leading_zeros());
    (a0 + 1).saturating_mul(bits + 2)
}

/// Minimal period of the continued fraction of `sqrt(d)`.
pub fn cf_period(d: u64) -> Result<PeriodResult> {
    if d == 0 {
        return Err(Error::ZeroDiscriminant);
    }
    let Some(steps) = SurdSteps::new(d) else {
        return Ok(PeriodResult {
            d,
            period: 0,
            a0: isqrt(d),
        });
    };
    let a0 = steps.a0();
    let cap = iteration_cap(d, a0);
    for (k, step) in (1..=cap).zip(steps) {
        if step.q == 1 {
            if cfg!(debug_assertions) && d <= 10_000 {
                debug_assert!(closes_cycle(d, k), "period {k} of sqrt({d}) is not a cycle");
            }
            return Ok(PeriodResult { d, period: k, a0 });
        }
    }
    Err(Error::IterationCap { d, cap })
}

/// Running the recurrence `period` more steps from step 1 lands on `(P_1, Q_1)` again.
fn closes_cycle(d: u64, period: u64) -> bool {
    let Some(mut steps) = SurdSteps::new(d) else {
        return period == 0;
    };
    let first = steps.next().expect("infinite iterator");
    let back = steps.nth(period as usize - 1).expect("infinite iterator");
    (back.p, back.q) == (first.p, first.q)
}

/// Partial quotients `[a0; a1, ..., aT]` covering one full period.
pub fn partial_quotients(d: u64) -> Result<Vec<u64>> {
    let res = cf_period(d)?;
    let mut out = vec![res.a0];
    if let Some(steps) = SurdSteps::new(d) {
        out.extend(steps.take(res.period as usize).map(|s| s.a));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_values() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(15), 3);
        let n = 1_000_000_000_000_000_000 - 1;
        let r = isqrt(n);
        assert_eq!(r, 999_999_999);
        assert!(u128::from(r) * u128::from(r) <= u128::from(n));
        assert!(u128::from(r + 1) * u128::from(r + 1) > u128::from(n));
        assert_eq!(isqrt(u64::MAX), u64::from(u32::MAX));
    }

    #[test]
    fn small_periods() {
        assert_eq!(cf_period(4).unwrap().period, 0);
        assert_eq!(cf_period(1).unwrap().period, 0);
        assert_eq!(cf_period(2).unwrap().period, 1);
        assert_eq!(cf_period(13).unwrap().period, 5);
        assert_eq!(cf_period(7).unwrap().period, 4);
        assert_eq!(cf_period(0), Err(Error::ZeroDiscriminant));
    }

    #[test]
    fn hand_recurrence_for_13() {
        let states: Vec<_> = SurdSteps::new(13)
            .unwrap()
            .take(5)
            .map(|s| (s.p, s.q, s.a))
            .collect();
        assert_eq!(
            states,
            vec![(3, 4, 1), (1, 3, 1), (2, 3, 1), (1, 4, 1), (3, 1, 6)]
        );
        assert_eq!(partial_quotients(13).unwrap(), vec![3, 1, 1, 1, 1, 6]);
    }

    #[test]
    fn near_u64_limit() {
        // d = r^2 + 1 always has period 1; r^2 + 2 has period 2.
        let r = u64::from(u32::MAX) - 10;
        assert_eq!(cf_period(r * r + 1).unwrap().period, 1);
        assert_eq!(cf_period(r * r + 2).unwrap().period, 2);
        assert_eq!(cf_period(r * r).unwrap().period, 0);
    }
}
