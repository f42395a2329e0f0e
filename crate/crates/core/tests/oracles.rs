use sqrt_period::arith::{
    epsilon, factorize, gauss_sum, phi, rho_closed, rho_series_partial, sawtooth, sawtooth_fourier,
};
use sqrt_period::gcount::g_sieve;
use sqrt_period::moments::compute_moments;
use sqrt_period::wsum::{gcd_split, triples_by_d, w_identities, Quadruple};

/// Pairs `(x, y)` of residues mod Δ with `x^2 ≡ y^2`, counted one by one.
fn rho_pairs(delta: u64) -> u64 {
    let mut n = 0;
    for x in 0..delta {
        for y in 0..delta {
            n += u64::from((x * x + delta * delta - y * y).is_multiple_of(delta));
        }
    }
    n
}

#[test]
fn rho_matches_pair_count() {
    for delta in 1..=300 {
        assert_eq!(rho_closed(delta).rho, rho_pairs(delta), "Delta = {delta}");
    }
}

#[test]
fn rho_prime_power_factors() {
    // ρ(p^a) = p^a + a (p^a - p^(a-1)) for odd p and a·2^a at p = 2
    for p in [3u64, 5, 7, 11, 13] {
        for a in 1..=6u32 {
            let q = p.pow(a);
            assert_eq!(
                rho_closed(q).rho,
                q + u64::from(a) * (q - q / p),
                "p^a = {q}"
            );
        }
    }
    for a in 1..=20u32 {
        assert_eq!(rho_closed(1 << a).rho, u64::from(a) << a);
    }
}

#[test]
fn gauss_sum_moduli() {
    // |S(δ, c)|^2 = ε(δ) δ for gcd(c, δ) = 1
    for delta in 1..=120u64 {
        for c in (1..=delta as i64).filter(|&c| sqrt_period::arith::gcd(c as u64, delta) == 1) {
            let s = gauss_sum(delta, c).unwrap().norm_sqr();
            let expect = (epsilon(delta) * delta) as f64;
            assert!((s - expect).abs() < 1e-8 * delta as f64, "S({delta}, {c})");
        }
    }
}

#[test]
fn divisor_sum_terms() {
    let f = factorize(360);
    let total: u64 = f
        .divisors_with_phi()
        .into_iter()
        .map(|(d, ph)| {
            assert_eq!(ph, phi(d));
            epsilon(d) * ph * (360 / d)
        })
        .sum();
    assert_eq!(total, rho_closed(360).rho);
}

#[test]
fn series_partial_sums_increase() {
    let a = rho_series_partial(1_000);
    let b = rho_series_partial(10_000);
    assert!(a < b && b < 2.090_197_287_377_8);
}

#[test]
fn sawtooth_truncation_error_shrinks() {
    // away from the jumps the truncated series converges like 1/H
    let points = [0.1, 0.25, 0.37, 0.5, 0.81, 2.3];
    let err = |h| {
        points
            .iter()
            .map(|&u| (sawtooth(u) - sawtooth_fourier(u, h)).abs())
            .fold(0.0, f64::max)
    };
    let (e10, e1000) = (err(10), err(1_000));
    assert!(e1000 < e10 / 20.0, "{e10} -> {e1000}");
    assert!(e1000 < 5e-3);
}

#[test]
fn pairs_of_representations_share_the_gcd_residue() {
    for reps in triples_by_d(1_500).unwrap() {
        for a in &reps {
            for b in &reps {
                let split = gcd_split(&Quadruple::new(a.m, b.m, a.q, b.q));
                assert!(split.nu.is_some(), "{a:?} {b:?}");
            }
        }
    }
}

#[test]
fn w_equals_sum_of_squares() {
    let g = g_sieve(0, 700).unwrap();
    let s2: u64 = g.counts().iter().map(|&c| u64::from(c).pow(2)).sum();
    let id = w_identities(700).unwrap();
    assert_eq!(id.w, s2);
    assert_eq!(compute_moments(700).unwrap().s2_g, s2);
    assert!(id.consistent());
}
