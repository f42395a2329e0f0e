//! The four-dimensional integral
//!
//! ```text
//! S(ε) = ∫_0^1 du1 ∫_0^1 du2 ∫_ε^{1+u1} dv1 ∫_ε^{1+u2} dv2 φ(u1, u2, v1, v2)
//! φ = max(0, min(1, (u1+v1)^2, (u2+v2)^2) - max(u1^2, u2^2, (u1-v1)^2, (u2-v2)^2)) / (v1 v2)
//! ```
//!
//! whose limit `S = S(0) = 2 ln^2 2` fixes the second-moment constant
//! `c0 = 13 ζ(2) S / (14 ζ(3))`.
//!
//! Estimates are plain Monte Carlo. Each `vi` is drawn uniformly from
//! `(ε, 1 + ui]` and the sample is weighted by the slice length
//! `(1 + u1 - ε)(1 + u2 - ε)`. Samples are cut into fixed batches; batch `b`
//! draws from a ChaCha8 stream keyed by `(seed, b)`, so an estimate depends
//! only on the seed and the sample count, never on the thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{ZETA_2, ZETA_3};
use crate::{Error, Result};

/// Samples per RNG stream.
pub const BATCH: u64 = 1 << 14;

/// Ceiling on `|S(ε) - S| / (ε ln^2(1/ε))` in [`s_eps_convergence`].
pub const CONVERGENCE_CAP: f64 = 20.0;

pub const CSV_HEADER: &str = "eps,estimate,stderr,samples,seed";

/// `2 ln^2 2`.
pub fn s_exact() -> f64 {
    2.0 * std::f64::consts::LN_2 * std::f64::consts::LN_2
}

#[inline]
fn f_parts(u1: f64, u2: f64, v1: f64, v2: f64) -> [f64; 4] {
    [
        u1 * u1,
        u2 * u2,
        (u1 - v1) * (u1 - v1),
        (u2 - v2) * (u2 - v2),
    ]
}

#[inline]
fn g_parts(u1: f64, u2: f64, v1: f64, v2: f64) -> [f64; 3] {
    [1.0, (u1 + v1) * (u1 + v1), (u2 + v2) * (u2 + v2)]
}

#[inline]
fn phi(u1: f64, u2: f64, v1: f64, v2: f64) -> f64 {
    let f = f_parts(u1, u2, v1, v2).into_iter().fold(f64::MIN, f64::max);
    let g = g_parts(u1, u2, v1, v2).into_iter().fold(f64::MAX, f64::min);
    (g - f).max(0.0) / (v1 * v2)
}

/// `φ(u1, u2, v1, v2)`; requires `v1, v2 > 0`.
pub fn integrand_phi(u1: f64, u2: f64, v1: f64, v2: f64) -> Result<f64> {
    if !(v1 > 0.0 && v2 > 0.0) {
        return Err(Error::NonPositiveV { v1, v2 });
    }
    Ok(phi(u1, u2, v1, v2))
}

/// Which of `f1..f4` is the maximum and which of `g1..g3` the minimum
/// (1-based, lowest index on ties).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RegionLabel {
    pub r: u8,
    pub s: u8,
}

impl RegionLabel {
    pub fn all() -> impl Iterator<Item = RegionLabel> {
        (1..=4).flat_map(|r| (1..=3).map(move |s| RegionLabel { r, s }))
    }
}

fn in_domain(u1: f64, u2: f64, v1: f64, v2: f64) -> bool {
    let ok = |u: f64, v: f64| (0.0..=1.0).contains(&u) && v > 0.0 && v <= 1.0 + u;
    ok(u1, v1) && ok(u2, v2)
}

fn arg_by(values: &[f64], better: impl Fn(f64, f64) -> bool) -> u8 {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if better(v, values[best]) {
            best = i;
        }
    }
    best as u8 + 1
}

fn label(u1: f64, u2: f64, v1: f64, v2: f64) -> RegionLabel {
    RegionLabel {
        r: arg_by(&f_parts(u1, u2, v1, v2), |a, b| a > b),
        s: arg_by(&g_parts(u1, u2, v1, v2), |a, b| a < b),
    }
}

/// Region label of a point of `0 <= ui <= 1`, `0 < vi <= 1 + ui`.
pub fn classify_region(u1: f64, u2: f64, v1: f64, v2: f64) -> Result<RegionLabel> {
    if !in_domain(u1, u2, v1, v2) {
        return Err(Error::OutsideDomain { u1, u2, v1, v2 });
    }
    Ok(label(u1, u2, v1, v2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean - target| <= k · stderr`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        let n = self.n + o.n;
        let delta = o.mean - self.mean;
        let w = o.n as f64 / n as f64;
        Moments {
            n,
            mean: self.mean + delta * w,
            m2: self.m2 + o.m2 + delta * delta * self.n as f64 * w,
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidEps(eps))
    }
}

/// Monte Carlo mean of `weight(point) · φ(point) · slice volume`.
fn mc<W>(eps: f64, samples: u64, seed: u64, weight: W) -> Result<McEstimate>
where
    W: Fn(f64, f64, f64, f64) -> f64 + Sync,
{
    check_eps(eps)?;
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let batches = samples.div_ceil(BATCH);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = BATCH.min(samples - b * BATCH);
            let mut acc = Moments::default();
            for _ in 0..n {
                let u1: f64 = rng.random();
                let u2: f64 = rng.random();
                let (len1, len2) = (1.0 + u1 - eps, 1.0 + u2 - eps);
                // 1 - U lies in (0, 1], keeping vi > eps
                let v1 = eps + len1 * (1.0 - rng.random::<f64>());
                let v2 = eps + len2 * (1.0 - rng.random::<f64>());
                let w = weight(u1, u2, v1, v2);
                let y = if w == 0.0 {
                    0.0
                } else {
                    w * phi(u1, u2, v1, v2) * len1 * len2
                };
                acc.push(y);
            }
            acc
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = total.m2 / (total.n - 1).max(1) as f64;
    Ok(McEstimate {
        mean: total.mean,
        stderr: (var / total.n as f64).sqrt(),
        samples,
        seed,
    })
}

/// Estimate of `S(ε)`; `ε = 0` gives `S` itself.
pub fn integrate_s(eps: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    mc(eps, samples, seed, |_, _, _, _| 1.0)
}

/// Contribution of the points labelled `region`.
pub fn integrate_s_region(
    eps: f64,
    samples: u64,
    seed: u64,
    region: RegionLabel,
) -> Result<McEstimate> {
    mc(eps, samples, seed, move |u1, u2, v1, v2| {
        f64::from(u8::from(label(u1, u2, v1, v2) == region))
    })
}

/// Twice the contribution of `v1 <= v2`.
pub fn integrate_s_ordered(eps: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    mc(
        eps,
        samples,
        seed,
        |_, _, v1, v2| if v1 <= v2 { 2.0 } else { 0.0 },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub estimate: McEstimate,
    /// `|S(ε) - S|`.
    pub deviation: f64,
    /// `deviation / (ε ln^2(1/ε))`.
    pub ratio: f64,
}

impl ConvergenceRow {
    pub fn csv_row(&self) -> String {
        csv_row(self.eps, &self.estimate)
    }
}

/// One row of [`CSV_HEADER`].
pub fn csv_row(eps: f64, est: &McEstimate) -> String {
    format!(
        "{},{:.12},{:.12},{},{}",
        eps, est.mean, est.stderr, est.samples, est.seed
    )
}

/// `S(ε)` for each cutoff in `(0, 1/2]` and its distance from `S`.
pub fn s_eps_convergence(eps_list: &[f64], samples: u64, seed: u64) -> Result<Vec<ConvergenceRow>> {
    if let Some(&bad) = eps_list.iter().find(|&&e| !(e > 0.0 && e <= 0.5)) {
        return Err(Error::InvalidEps(bad));
    }
    let exact = s_exact();
    eps_list
        .iter()
        .map(|&eps| {
            let estimate = integrate_s(eps, samples, seed)?;
            let deviation = (estimate.mean - exact).abs();
            let scale = eps * (1.0 / eps).ln().powi(2);
            Ok(ConvergenceRow {
                eps,
                estimate,
                deviation,
                ratio: deviation / scale,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub s_exact: f64,
    pub c0: f64,
    pub c1: f64,
    /// Approximations in circulation, computed from the
    /// earlier numerical value `S ≈ 0.959`.
    pub s_numeric_quote: f64,
    pub c0_quote: f64,
    pub c1_quote: f64,
}

/// `c0 / S = 13 ζ(2) / (14 ζ(3))`.
pub fn c0_over_s() -> f64 {
    13.0 * ZETA_2 / (14.0 * ZETA_3)
}

pub fn constants() -> Constants {
    let s = s_exact();
    let c0 = c0_over_s() * s;
    Constants {
        s_exact: s,
        c0,
        c1: 3.0 * c0,
        s_numeric_quote: 0.959,
        c0_quote: 1.218,
        c1_quote: 3.654,
    }
}
