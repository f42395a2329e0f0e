//! Multiplicative functions, modular inverses, quadratic Gauss sums and the
//! sawtooth function.
//!
//! The centre of the module is
//!
//! ```text
//! ρ(Δ) = #{ 1 <= x, y <= Δ : x^2 ≡ y^2 (mod Δ) }
//! ```
//!
//! computed three independent ways: residue multiplicities
//! ([`rho_bruteforce`]), the divisor sum `Σ_{δ|Δ} ε(δ) φ(δ) Δ/δ`
//! ([`rho_closed`]) and the Gauss-sum average `Δ^{-1} Σ_c |S(Δ, c)|^2`
//! ([`rho_via_gauss`]).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// ζ(3) (Apéry's constant), 30 significant digits.
#[allow(clippy::excessive_precision)]
pub const ZETA_3: f64 = 1.202_056_903_159_594_285_399_738_161_51;

/// ζ(2) = π²/6.
pub const ZETA_2: f64 = PI * PI / 6.0;

/// Largest Δ accepted by [`rho_bruteforce`].
pub const RHO_BRUTE_CAP: u64 = 1_000_000;

/// Largest q accepted by [`gauss_sum`].
pub const GAUSS_SUM_CAP: u64 = 100_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, s, t)` with `a s + b t = g = gcd(a, b)`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// `b` in `[0, n)` with `a b ≡ 1 (mod n)`. For `n = 1` the answer is 0.
pub fn mod_inverse(a: i64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::NotCoprime { a, n });
    }
    let n128 = i128::from(n);
    let (g, s, _) = ext_gcd(i128::from(a).rem_euclid(n128), n128);
    if g != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    Ok(s.rem_euclid(n128) as u64)
}

/// Prime factorisation as strictly increasing `(prime, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn tau(&self) -> u64 {
        self.0.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    pub fn phi(&self) -> u64 {
        self.0
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn mobius(&self) -> i8 {
        if self.0.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.0.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All divisors paired with their Euler totient, unordered.
    pub fn divisors_with_phi(&self) -> Vec<(u64, u64)> {
        let mut out = vec![(1u64, 1u64)];
        for &(p, e) in &self.0 {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                let phi_pk = pk - pk / p;
                for i in 0..len {
                    let (d, f) = out[i];
                    out.push((d * pk, f * phi_pk));
                }
            }
        }
        out
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self
            .divisors_with_phi()
            .into_iter()
            .map(|(d, _)| d)
            .collect();
        d.sort_unstable();
        d
    }
}

/// Trial division. `factorize(1)` is empty; `factorize(0)` is empty as well.
pub fn factorize(mut n: u64) -> Factorization {
    let mut out = Vec::new();
    if n == 0 {
        return Factorization(out);
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Factorization(out)
}

/// Smallest-prime-factor table for `1..=n`, built once and shared read-only.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(n: u32) -> Self {
        let n = n as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn factorize(&self, mut n: u32) -> Factorization {
        assert!(n <= self.limit(), "{n} beyond sieve limit {}", self.limit());
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            n /= p;
            match out.last_mut() {
                Some((q, e)) if *q == u64::from(p) => *e += 1,
                _ => out.push((u64::from(p), 1)),
            }
        }
        Factorization(out)
    }
}

pub fn tau(n: u64) -> u64 {
    factorize(n).tau()
}

pub fn phi(n: u64) -> u64 {
    factorize(n).phi()
}

pub fn mobius(n: u64) -> i8 {
    factorize(n).mobius()
}

/// 1 for odd δ, 2 for δ ≡ 0 (mod 4), 0 for δ ≡ 2 (mod 4).
pub fn epsilon(delta: u64) -> u64 {
    match delta % 4 {
        1 | 3 => 1,
        0 => 2,
        _ => 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RhoValue {
    pub delta: u64,
    pub rho: u64,
}

/// `ρ(Δ)` from the multiplicities `N(c) = #{x : x^2 ≡ c}`: `ρ = Σ_c N(c)^2`.
pub fn rho_bruteforce(delta: u64) -> Result<RhoValue> {
    if delta == 0 || delta > RHO_BRUTE_CAP {
        return Err(Error::CapExceeded {
            what: "Delta",
            value: delta,
            cap: RHO_BRUTE_CAP,
        });
    }
    let mut mult = vec![0u64; delta as usize];
    for x in 1..=delta {
        mult[((x * x) % delta) as usize] += 1;
    }
    Ok(RhoValue {
        delta,
        rho: mult.iter().map(|n| n * n).sum(),
    })
}

/// `Σ_{δ|Δ} ε(δ) φ(δ) (Δ/δ)` for a factored Δ.
pub fn rho_from_factorization(f: &Factorization) -> u64 {
    let delta = f.value();
    f.divisors_with_phi()
        .into_iter()
        .map(|(d, phi_d)| epsilon(d) * phi_d * (delta / d))
        .sum()
}

/// `ρ(Δ)` by the closed divisor sum, factoring Δ by trial division.
pub fn rho_closed(delta: u64) -> RhoValue {
    RhoValue {
        delta,
        rho: rho_from_factorization(&factorize(delta)),
    }
}

/// `Σ_{Δ<=N} ρ(Δ)/Δ^3`.
pub fn rho_series_partial(n: u32) -> f64 {
    let sieve = SpfSieve::new(n);
    // smallest terms first
    (1..=n)
        .rev()
        .map(|d| {
            let rho = rho_from_factorization(&sieve.factorize(d)) as f64;
            let df = f64::from(d);
            rho / (df * df * df)
        })
        .sum()
}

/// `(13/14) ζ(2)^2 / ζ(3)`, the value of the full series.
pub fn rho_series_limit() -> f64 {
    13.0 / 14.0 * ZETA_2 * ZETA_2 / ZETA_3
}

/// Upper bound for `Σ_{Δ>N} ρ(Δ)/Δ^3`.
///
/// From `ρ(Δ) <= 2Δτ(Δ)` the tail is at most `2 Σ_{n>N} τ(n)/n^2`, and with
/// `Σ_{n<=t} τ(n) <= t (1 + ln t)` partial summation gives
/// `Σ_{n>N} τ(n)/n^2 <= 2 (ln N + 2) / N`.
pub fn rho_series_tail_bound(n: u32) -> f64 {
    let nf = f64::from(n.max(1));
    4.0 * (nf.ln() + 2.0) / nf
}

/// `S(q, a) = Σ_{x=1}^{q} e(a x^2 / q)` by direct summation.
pub fn gauss_sum(q: u64, a: i64) -> Result<Complex64> {
    if q == 0 || q > GAUSS_SUM_CAP {
        return Err(Error::CapExceeded {
            what: "q",
            value: q,
            cap: GAUSS_SUM_CAP,
        });
    }
    let a = i128::from(a).rem_euclid(i128::from(q)) as u128;
    let q128 = u128::from(q);
    let mut sum = Complex64::new(0.0, 0.0);
    for x in 1..=q128 {
        // reduce the phase exactly before it reaches floating point
        let r = (a * ((x * x) % q128)) % q128;
        sum += Complex64::from_polar(1.0, 2.0 * PI * r as f64 / q as f64);
    }
    Ok(sum)
}

/// `ρ(Δ) = Δ^{-1} Σ_{c=1}^{Δ} |S(Δ, c)|^2`, in floating point.
pub fn rho_via_gauss(delta: u64) -> Result<f64> {
    let mut total = 0.0;
    for c in 1..=delta {
        total += gauss_sum(delta, c as i64)?.norm_sqr();
    }
    Ok(total / delta as f64)
}

/// `ϱ(u) = 1/2 - {u}`.
pub fn sawtooth(u: f64) -> f64 {
    0.5 - (u - u.floor())
}

/// Truncated Fourier series `Σ_{h=1}^{H} sin(2π h u) / (π h)` of the sawtooth.
pub fn sawtooth_fourier(u: f64, terms: u32) -> f64 {
    let frac = u - u.floor();
    (1..=terms)
        .map(|h| {
            let h = f64::from(h);
            (2.0 * PI * h * frac).sin() / (PI * h)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 7), Ok(5));
        assert_eq!(mod_inverse(1, 9), Ok(1));
        assert_eq!(mod_inverse(-1, 9), Ok(8));
        assert_eq!(mod_inverse(5, 1), Ok(0));
        assert_eq!(mod_inverse(2, 4), Err(Error::NotCoprime { a: 2, n: 4 }));
        assert!(mod_inverse(0, 5).is_err());
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(240, 46), (17, 5), (0, 9), (9, 0), (-12, 18)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(a * s + b * t, g);
            assert_eq!(
                g as u64,
                gcd(a.unsigned_abs() as u64, b.unsigned_abs() as u64)
            );
        }
    }

    #[test]
    fn factorization_basics() {
        let f = factorize(360);
        assert_eq!(f.pairs(), &[(2, 3), (3, 2), (5, 1)]);
        assert_eq!(f.value(), 360);
        assert_eq!(f.tau(), 24);
        assert_eq!(f.phi(), 96);
        assert_eq!(f.mobius(), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(1), 1);
        assert_eq!(factorize(1).pairs(), &[]);
        assert_eq!(factorize(97).pairs(), &[(97, 1)]);
        assert_eq!(factorize(12).divisors(), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn spf_matches_trial_division() {
        let s = SpfSieve::new(5000);
        for n in 1..=5000 {
            assert_eq!(s.factorize(n), factorize(u64::from(n)));
        }
    }

    #[test]
    fn epsilon_table() {
        assert_eq!(
            (1..=8).map(epsilon).collect::<Vec<_>>(),
            vec![1, 0, 1, 2, 1, 0, 1, 2]
        );
    }

    #[test]
    fn rho_small() {
        assert_eq!(rho_bruteforce(1).unwrap().rho, 1);
        assert_eq!(rho_bruteforce(5).unwrap().rho, 9);
        assert_eq!(rho_bruteforce(4).unwrap().rho, 8);
        assert_eq!(rho_closed(4).rho, 8);
        assert_eq!(rho_closed(12).rho, 40);
        assert_eq!(rho_bruteforce(12).unwrap().rho, 40);
        for p in [3u64, 7, 11, 101] {
            assert_eq!(rho_closed(p).rho, 2 * p - 1);
        }
        for a in 1..=10u32 {
            assert_eq!(rho_closed(1 << a).rho, u64::from(a) << a);
        }
        assert!(rho_bruteforce(0).is_err());
        assert!(rho_bruteforce(RHO_BRUTE_CAP + 1).is_err());
    }

    #[test]
    fn series_head() {
        assert_eq!(rho_series_partial(1), 1.0);
        assert_eq!(rho_series_partial(2), 1.25);
    }

    #[test]
    fn gauss_sums() {
        assert!((gauss_sum(5, 1).unwrap().norm_sqr() - 5.0).abs() < 1e-9);
        assert!(gauss_sum(2, 1).unwrap().norm() < 1e-12);
        assert!((gauss_sum(4, 1).unwrap().norm_sqr() - 8.0).abs() < 1e-9);
        assert!((gauss_sum(4, -3).unwrap() - gauss_sum(4, 1).unwrap()).norm() < 1e-12);
        assert!(gauss_sum(0, 1).is_err());
    }

    #[test]
    fn sawtooth_values() {
        assert_eq!(sawtooth(0.25), 0.25);
        assert_eq!(sawtooth(0.0), 0.5);
        assert_eq!(sawtooth(-0.25), -0.25);
        assert!((sawtooth_fourier(0.3, 10_000) - sawtooth(0.3)).abs() < 1e-3);
        // the partial sums vanish at the jump
        assert!(sawtooth_fourier(2.0, 50).abs() < 1e-12);
    }
}
