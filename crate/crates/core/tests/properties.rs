use proptest::prelude::*;

use sqrt_period::arith::{gcd, mod_inverse, rho_bruteforce, rho_closed, sawtooth, tau};
use sqrt_period::cf::{cf_period, isqrt, SurdSteps};
use sqrt_period::gcount::{g_of_d, g_sieve_chunked};
use sqrt_period::squad::{classify_region, integrand_phi};
use sqrt_period::wsum::{
    count_k_direct, count_k_modular, in_a, raw_k_range, window_bounds, Quadruple,
};

proptest! {
    #[test]
    fn surd_states_stay_reduced(d in 2u64..5_000_000) {
        let Some(steps) = SurdSteps::new(d) else { return Ok(()) };
        let a0 = isqrt(d);
        let t = cf_period(d).unwrap().period;
        for (k, s) in (1..=t).zip(steps) {
            prop_assert!(s.p >= 1 && s.p <= a0);
            prop_assert!(s.q >= 1 && s.q <= 2 * a0);
            prop_assert_eq!((d - s.p * s.p) % s.q, 0);
            // Q_k = 1 exactly at the end of the period
            prop_assert_eq!(s.q == 1, k == t);
        }
    }

    #[test]
    fn last_quotient_is_twice_a0(d in 2u64..1_000_000_000) {
        let r = cf_period(d).unwrap();
        if !r.is_square() {
            let last = SurdSteps::new(d).unwrap().nth(r.period as usize - 1).unwrap();
            prop_assert_eq!(last.a, 2 * r.a0);
        }
    }

    #[test]
    fn sieve_matches_divisor_count(lo in 0u64..20_000, len in 1u64..300, chunk in 1u64..500) {
        let t = g_sieve_chunked(lo, lo + len, chunk).unwrap();
        for (d, g) in t.iter() {
            prop_assert_eq!(g, g_of_d(d), "d = {}", d);
        }
    }

    #[test]
    fn rho_is_multiplicative(a in 1u64..2_000, b in 1u64..2_000) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(rho_closed(a * b).rho, rho_closed(a).rho * rho_closed(b).rho);
    }

    #[test]
    fn rho_routes_agree(delta in 1u64..5_000) {
        prop_assert_eq!(rho_closed(delta).rho, rho_bruteforce(delta).unwrap().rho);
        prop_assert!(rho_closed(delta).rho <= 2 * delta * tau(delta));
    }

    #[test]
    fn inverse_inverts(a in -10_000i64..10_000, n in 1u64..10_000) {
        match mod_inverse(a, n) {
            Ok(inv) => {
                prop_assert!(inv < n);
                let prod = (i128::from(a) * i128::from(inv)).rem_euclid(i128::from(n));
                prop_assert_eq!(prod, 1 % i128::from(n));
            }
            Err(_) => prop_assert!(gcd(a.unsigned_abs(), n) != 1),
        }
    }

    #[test]
    fn floor_difference_through_sawtooth(v in -1e3f64..1e3, w in -1e3f64..1e3) {
        let lhs = w.floor() - v.floor();
        let rhs = w - v + sawtooth(w) - sawtooth(v);
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn window_matches_raw_inequalities(
        m1 in 1u64..40, m2 in 1u64..40, q1 in 1u64..80, q2 in 1u64..80, x in 1u64..3_000,
    ) {
        let quad = Quadruple::new(m1, m2, q1, q2);
        let (first, last) = window_bounds(x, &quad).k_range();
        let (rf, rl) = raw_k_range(x, &quad);
        prop_assert!((first > last && rf > rl) || (first, last) == (rf, rl));
    }

    #[test]
    fn counting_routes_agree(
        m1 in 1u64..30, m2 in 1u64..30, q1 in 1u64..60, q2 in 1u64..60, x in 1u64..2_000,
    ) {
        let quad = Quadruple::new(m1, m2, q1, q2);
        prop_assert_eq!(count_k_direct(x, &quad), count_k_modular(x, &quad));
    }

    #[test]
    fn window_solutions_are_pairs_of_representations(
        m1 in 1u64..20, m2 in 1u64..20, q1 in 1u64..40, q2 in 1u64..40, x in 1u64..1_000,
    ) {
        let quad = Quadruple::new(m1, m2, q1, q2);
        prop_assume!(in_a(x, &quad));
        let (first, last) = window_bounds(x, &quad).k_range();
        for k1 in first.max(1)..=last {
            let d = i128::from(m1 * m1) + k1 * i128::from(q1);
            let rest = d - i128::from(m2 * m2);
            if rest % i128::from(q2) != 0 {
                continue;
            }
            let k2 = rest / i128::from(q2);
            prop_assert!(d <= i128::from(x));
            prop_assert!(k2 >= 1);
            prop_assert!((k1 - i128::from(q1)).abs() <= 2 * i128::from(m1));
            prop_assert!((k2 - i128::from(q2)).abs() <= 2 * i128::from(m2));
        }
    }

    #[test]
    fn phi_is_symmetric_and_bounded(
        u1 in 0f64..=1.0, u2 in 0f64..=1.0, t1 in 1e-9f64..=1.0, t2 in 1e-9f64..=1.0,
    ) {
        let (v1, v2) = (t1 * (1.0 + u1), t2 * (1.0 + u2));
        let p = integrand_phi(u1, u2, v1, v2).unwrap();
        prop_assert!(p >= 0.0);
        prop_assert_eq!(p, integrand_phi(u2, u1, v2, v1).unwrap());
        prop_assert!(p <= 4.0 * (u1 / v2).min(u2 / v1) * (1.0 + 1e-12) + 1e-12);
        let l = classify_region(u1, u2, v1, v2).unwrap();
        prop_assert!((1..=4).contains(&l.r) && (1..=3).contains(&l.s));
    }
}
