//! The second moment `W(x) = Σ_{d<=x} g(d)^2` as an explicit sum over pairs
//! of representations `d = m1^2 + k1 q1 = m2^2 + k2 q2` with
//! `|ki - qi| < 2 mi` and `ki >= 1`.
//!
//! Fixing `(m1, m2, q1, q2)` and solving for `k = k1`, the admissible `k`
//! form the window `f < k <= g` intersected with the congruence
//! `k q1 ≡ m2^2 - m1^2 (mod q2)`, where
//!
//! ```text
//! q1 f = max(m1^2, m2^2, (q1 - m1)^2, (q2 - m2)^2) - m1^2
//! q1 g = min(x, (q1 + m1)^2, (q2 + m2)^2) - m1^2
//! ```
//!
//! Both ends are kept as exact integers scaled by `q1` ([`WindowBounds`]).
//! The congruence is solved through `Δ = gcd(q1, q2)`, `qi = Δ κi`:
//! it is solvable iff `Δ | m2^2 - m1^2`, and then `k ≡ ν κ̄1 (mod κ2)` with
//! `ν = (m2^2 - m1^2)/Δ`. Counting the progression inside the window is a
//! difference of two floors ([`count_k_modular`]); [`count_k_direct`] walks
//! the window instead.
//!
//! Note that these windows use weak upper bounds throughout, so the resulting
//! sum `W2` is not `W` itself; the two evaluation routes of `W2` are compared
//! with each other, while `W` is compared with `Σ g(d)^2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, mod_inverse};
use crate::cf::isqrt;
use crate::{Error, Result};

/// Largest `x` for the enumeration-based routes.
pub const ORACLE_CAP: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Quadruple {
    pub m1: u64,
    pub m2: u64,
    pub q1: u64,
    pub q2: u64,
}

impl Quadruple {
    pub const fn new(m1: u64, m2: u64, q1: u64, q2: u64) -> Self {
        Self { m1, m2, q1, q2 }
    }

    /// `(m2, m1, q2, q1)`.
    pub fn swapped(&self) -> Self {
        Self::new(self.m2, self.m1, self.q2, self.q1)
    }

    /// `m2^2 - m1^2`.
    pub fn square_gap(&self) -> i128 {
        sq(self.m2) - sq(self.m1)
    }
}

#[inline]
fn sq(v: u64) -> i128 {
    let v = i128::from(v);
    v * v
}

#[inline]
fn sq_diff(a: u64, b: u64) -> i128 {
    let v = i128::from(a) - i128::from(b);
    v * v
}

/// Window `f < k <= g` stored as `f_num = q1 f`, `g_num = q1 g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowBounds {
    pub f_num: i128,
    pub g_num: i128,
    pub q1: u64,
}

impl WindowBounds {
    pub fn is_open(&self) -> bool {
        self.f_num < self.g_num
    }

    /// Smallest and largest integer `k` in the window (empty when `first > last`).
    pub fn k_range(&self) -> (i128, i128) {
        let q = i128::from(self.q1);
        (self.f_num.div_euclid(q) + 1, self.g_num.div_euclid(q))
    }
}

/// Closed-form window bounds for `quad` at level `x`.
pub fn window_bounds(x: u64, quad: &Quadruple) -> WindowBounds {
    let Quadruple { m1, m2, q1, q2 } = *quad;
    let f_max = sq(m1).max(sq(m2)).max(sq_diff(q1, m1)).max(sq_diff(q2, m2));
    let g_min = i128::from(x).min(sq(q1 + m1)).min(sq(q2 + m2));
    let wb = WindowBounds {
        f_num: f_max - sq(m1),
        g_num: g_min - sq(m1),
        q1,
    };
    debug_assert!(
        q1 == 0 || {
            let (a, b) = wb.k_range();
            let (c, e) = raw_k_range(x, quad);
            (a > b && c > e) || (a, b) == (c, e)
        },
        "closed-form window disagrees with the raw inequalities for {quad:?} at x = {x}"
    );
    wb
}

/// Integer `k` range cut out by the raw inequalities on `k = k1`:
///
/// * `(q2 - m2)^2 - m1^2 < k q1 <= (q2 + m2)^2 - m1^2` (the `k2` window),
/// * `0 < k`, `k q1 <= x - m1^2` (positivity of `k1` and `d <= x`),
/// * `k q1 > m2^2 - m1^2` (positivity of `k2`),
/// * `q1 - 2 m1 < k <= q1 + 2 m1` (the `k1` window),
///
/// with the upper ends taken weakly, as in the windowed sum.
pub fn raw_k_range(x: u64, quad: &Quadruple) -> (i128, i128) {
    let Quadruple { m1, m2, q1, q2 } = *quad;
    let q = i128::from(q1);
    let m1sq = sq(m1);
    // strict lower bounds on k q1, and on k itself
    let lower_scaled = [sq_diff(q2, m2) - m1sq, sq(m2) - m1sq];
    let lower_plain = [0i128, i128::from(q1) - 2 * i128::from(m1)];
    let upper_scaled = [sq(q2 + m2) - m1sq, i128::from(x) - m1sq];
    let upper_plain = [i128::from(q1) + 2 * i128::from(m1)];

    let first = lower_scaled
        .iter()
        .map(|l| l.div_euclid(q) + 1)
        .chain(lower_plain.iter().map(|l| l + 1))
        .max()
        .unwrap();
    let last = upper_scaled
        .iter()
        .map(|u| u.div_euclid(q))
        .chain(upper_plain.iter().copied())
        .min()
        .unwrap();
    (first, last)
}

/// Membership in the set of quadruples with a non-empty window, including the
/// box constraints `mi^2 <= x`, `qi <= sqrt(x) + mi` and `q1 <= q2`.
pub fn in_a(x: u64, quad: &Quadruple) -> bool {
    let Quadruple { m1, m2, q1, q2 } = *quad;
    let x128 = i128::from(x);
    let in_box =
        |m: u64, q: u64| m >= 1 && q >= 1 && sq(m) <= x128 && (q <= m || sq(q - m) <= x128);
    in_box(m1, q1) && in_box(m2, q2) && q1 <= q2 && window_bounds(x, quad).is_open()
}

/// Number of integers `k` with `f < k <= g` and `k q1 ≡ m2^2 - m1^2 (mod q2)`,
/// by walking the window.
pub fn count_k_direct(x: u64, quad: &Quadruple) -> u64 {
    let wb = window_bounds(x, quad);
    if !wb.is_open() {
        return 0;
    }
    let (first, last) = wb.k_range();
    let (q1, q2) = (i128::from(quad.q1), i128::from(quad.q2));
    let gap = quad.square_gap();
    (first..=last)
        .filter(|k| (k * q1 - gap).rem_euclid(q2) == 0)
        .count() as u64
}

/// `Δ = gcd(q1, q2)`, `qi = Δ κi`, and `ν = (m2^2 - m1^2)/Δ` when it is integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GcdSplit {
    pub delta: u64,
    pub kappa1: u64,
    pub kappa2: u64,
    pub nu: Option<i128>,
}

pub fn gcd_split(quad: &Quadruple) -> GcdSplit {
    let delta = gcd(quad.q1, quad.q2);
    let gap = quad.square_gap();
    let d = i128::from(delta);
    GcdSplit {
        delta,
        kappa1: quad.q1 / delta,
        kappa2: quad.q2 / delta,
        nu: (gap.rem_euclid(d) == 0).then(|| gap / d),
    }
}

/// The solutions of `k q1 ≡ m2^2 - m1^2 (mod q2)` as `k ≡ residue (mod step)`,
/// with `0 <= residue < step`; `None` when the congruence is unsolvable.
pub fn residue_class(quad: &Quadruple) -> Option<(u64, u64)> {
    let split = gcd_split(quad);
    let nu = split.nu?;
    let kappa2 = split.kappa2;
    let inv = mod_inverse(split.kappa1 as i64, kappa2)
        .expect("kappa1 and kappa2 are coprime by construction");
    let k2 = i128::from(kappa2);
    let residue = (nu.rem_euclid(k2) * i128::from(inv)).rem_euclid(k2);
    Some((residue as u64, kappa2))
}

/// Same count as [`count_k_direct`], as `⌊(g - ϰ)/κ2⌋ - ⌊(f - ϰ)/κ2⌋` with
/// the residue `ϰ` from the modular inverse of `κ1` mod `κ2`.
pub fn count_k_modular(x: u64, quad: &Quadruple) -> u64 {
    let wb = window_bounds(x, quad);
    if !wb.is_open() {
        return 0;
    }
    let Some((residue, step)) = residue_class(quad) else {
        return 0;
    };
    let (first, last) = progression_bounds(&wb, residue, step);
    (last - first + 1).max(0) as u64
}

/// Range of `t` with `f < residue + t step <= g`.
fn progression_bounds(wb: &WindowBounds, residue: u64, step: u64) -> (i128, i128) {
    let q1 = i128::from(wb.q1);
    let shift = i128::from(residue) * q1;
    let modulus = q1 * i128::from(step);
    (
        (wb.f_num - shift).div_euclid(modulus) + 1,
        (wb.g_num - shift).div_euclid(modulus),
    )
}

/// One representation `d = m^2 + k q` with `|k - q| < 2m`, `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Triple {
    pub m: u64,
    pub q: u64,
    pub k: u64,
}

fn check_oracle_x(x: u64) -> Result<()> {
    if x > ORACLE_CAP {
        return Err(Error::CapExceeded {
            what: "x",
            value: x,
            cap: ORACLE_CAP,
        });
    }
    Ok(())
}

/// All representations of every `d <= x`, indexed by `d` (index 0 unused).
///
/// Plain nested loops over `m^2 < x`, `q <= x`, `k <= (x - m^2)/q`; the window
/// `|k - q| < 2m` is tested literally.
pub fn triples_by_d(x: u64) -> Result<Vec<Vec<Triple>>> {
    check_oracle_x(x)?;
    let mut by_d = vec![Vec::new(); x as usize + 1];
    let mut m = 1u64;
    while m * m < x {
        let rest = x - m * m;
        for q in 1..=rest {
            for k in 1..=rest / q {
                if k.abs_diff(q) < 2 * m {
                    by_d[(m * m + k * q) as usize].push(Triple { m, q, k });
                }
            }
        }
        m += 1;
    }
    Ok(by_d)
}

/// `W(x)` as the number of ordered pairs of representations of the same `d <= x`.
pub fn w_bruteforce(x: u64) -> Result<u64> {
    Ok(triples_by_d(x)?
        .iter()
        .map(|l| (l.len() * l.len()) as u64)
        .sum())
}

/// Pair counts over one `d`: all pairs, pairs with `q1 = q2`, pairs with `q1 <= q2`.
fn pair_counts(reps: &[Triple]) -> (u64, u64, u64) {
    let (mut all, mut diag, mut le) = (0, 0, 0);
    for a in reps {
        for b in reps {
            all += 1;
            diag += u64::from(a.q == b.q);
            le += u64::from(a.q <= b.q);
        }
    }
    (all, diag, le)
}

/// Every quadruple in the enumeration box for level `x` with `q1 <= q2`,
/// grouped by `m1`.
fn quads_for_m1(x: u64, m1: u64) -> impl Iterator<Item = Quadruple> {
    let root = isqrt(x);
    let m_max = root;
    (1..=m_max).flat_map(move |m2| {
        (1..=m1 + root)
            .flat_map(move |q1| (q1..=m2 + root).map(move |q2| Quadruple::new(m1, m2, q1, q2)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WIdentities {
    pub x: u64,
    pub w: u64,
    pub w_diag: u64,
    pub w_le: u64,
    pub w2_direct: u64,
    pub w2_modular: u64,
}

impl WIdentities {
    /// `W = 2 W_le - W_diag` and both routes to `W2` agree.
    pub fn consistent(&self) -> bool {
        self.w == 2 * self.w_le - self.w_diag && self.w2_direct == self.w2_modular
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.x, self.w, self.w_diag, self.w_le, self.w2_direct
        )
    }
}

pub const W_CSV_HEADER: &str = "x,W,W_diag,W_le,W2";

/// `W`, its diagonal and `q1 <= q2` parts from explicit pairs, and `W2` summed
/// over the quadruples in the windowed set by both counting routes.
pub fn w_identities(x: u64) -> Result<WIdentities> {
    let by_d = triples_by_d(x)?;
    let (w, w_diag, w_le) = by_d
        .iter()
        .map(|reps| pair_counts(reps))
        .fold((0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let root = isqrt(x);
    let (w2_direct, w2_modular) = (1..=root)
        .into_par_iter()
        .map(|m1| {
            let (mut direct, mut modular) = (0u64, 0u64);
            for quad in quads_for_m1(x, m1).filter(|q| in_a(x, q)) {
                direct += count_k_direct(x, &quad);
                modular += count_k_modular(x, &quad);
            }
            (direct, modular)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(WIdentities {
        x,
        w,
        w_diag,
        w_le,
        w2_direct,
        w2_modular,
    })
}

/// [`WIdentities`] for every level `0..=x_max` at once.
///
/// Every admissible `k` of a quadruple lands on a single `d = m1^2 + k q1`, and
/// the quadruple counts `k` at level `x` exactly when `d <= x`. So both `W2`
/// routes become histograms over `d` followed by prefix sums: the direct route
/// walks each window testing the congruence, the modular route steps through
/// `k = ϰ + t κ2` between the two floor bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WProfile {
    pub w: Vec<u64>,
    pub w_diag: Vec<u64>,
    pub w_le: Vec<u64>,
    pub w2_direct: Vec<u64>,
    pub w2_modular: Vec<u64>,
}

impl WProfile {
    pub fn at(&self, x: u64) -> WIdentities {
        let i = x as usize;
        WIdentities {
            x,
            w: self.w[i],
            w_diag: self.w_diag[i],
            w_le: self.w_le[i],
            w2_direct: self.w2_direct[i],
            w2_modular: self.w2_modular[i],
        }
    }

    pub fn max_x(&self) -> u64 {
        (self.w.len() - 1) as u64
    }
}

fn prefix_sums(mut v: Vec<u64>) -> Vec<u64> {
    for i in 1..v.len() {
        v[i] += v[i - 1];
    }
    v
}

fn add_into(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (s, t) in a.iter_mut().zip(b) {
        *s += t;
    }
    a
}

pub fn w_profile(x_max: u64) -> Result<WProfile> {
    let by_d = triples_by_d(x_max)?;
    let len = x_max as usize + 1;
    let mut w = vec![0u64; len];
    let mut w_diag = vec![0u64; len];
    let mut w_le = vec![0u64; len];
    for (d, reps) in by_d.iter().enumerate() {
        (w[d], w_diag[d], w_le[d]) = pair_counts(reps);
    }

    let root = isqrt(x_max);
    let (direct, modular) = (1..=root)
        .into_par_iter()
        .map(|m1| {
            let mut direct = vec![0u64; len];
            let mut modular = vec![0u64; len];
            let m1sq = m1 * m1;
            for quad in quads_for_m1(x_max, m1) {
                let wb = window_bounds(x_max, &quad);
                if !wb.is_open() {
                    continue;
                }
                let (first, last) = wb.k_range();
                let (q1, q2) = (i128::from(quad.q1), i128::from(quad.q2));
                let gap = quad.square_gap();
                for k in first..=last {
                    if (k * q1 - gap).rem_euclid(q2) == 0 {
                        direct[(i128::from(m1sq) + k * q1) as usize] += 1;
                    }
                }
                if let Some((residue, step)) = residue_class(&quad) {
                    let (t0, t1) = progression_bounds(&wb, residue, step);
                    for t in t0..=t1 {
                        let k = i128::from(residue) + t * i128::from(step);
                        modular[(i128::from(m1sq) + k * q1) as usize] += 1;
                    }
                }
            }
            (direct, modular)
        })
        .reduce(
            || (vec![0u64; len], vec![0u64; len]),
            |a, b| (add_into(a.0, b.0), add_into(a.1, b.1)),
        );

    Ok(WProfile {
        w: prefix_sums(w),
        w_diag: prefix_sums(w_diag),
        w_le: prefix_sums(w_le),
        w2_direct: prefix_sums(direct),
        w2_modular: prefix_sums(modular),
    })
}
