//! Cross-checks behind `verify quick|full`.

use clap::ValueEnum;
use sqrt_period::arith::{
    rho_bruteforce, rho_closed, rho_series_limit, rho_series_partial, rho_series_tail_bound,
    rho_via_gauss, tau,
};
use sqrt_period::gcount::g_sieve;
use sqrt_period::moments::{bound_2_rhs, compute_moments, markov_check, periods};
use sqrt_period::squad::{constants, integrate_s, s_exact};
use sqrt_period::wsum::w_profile;
use sqrt_period::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

struct Bounds {
    w_x: u64,
    rho_delta: u64,
    gauss_delta: u64,
    moment_xs: &'static [u64],
    series_n: u32,
    mc_samples: u64,
    hickerson_d: u64,
    markov_xs: &'static [u64],
}

impl Level {
    fn bounds(self) -> Bounds {
        match self {
            Level::Quick => Bounds {
                w_x: 400,
                rho_delta: 500,
                gauss_delta: 60,
                moment_xs: &[10, 100, 1_000, 10_000],
                series_n: 10_000,
                mc_samples: 1_000_000,
                hickerson_d: 10_000,
                markov_xs: &[1_000],
            },
            Level::Full => Bounds {
                w_x: 2_000,
                rho_delta: 3_000,
                gauss_delta: 200,
                moment_xs: &[10, 100, 1_000, 10_000, 100_000, 1_000_000],
                series_n: 100_000,
                mc_samples: 10_000_000,
                hickerson_d: 100_000,
                markov_xs: &[1_000, 10_000],
            },
        }
    }
}

/// One identity or inequality with both sides rendered.
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

fn check(name: impl Into<String>, pass: bool, lhs: impl ToString, rhs: impl ToString) -> Check {
    Check {
        name: name.into(),
        pass,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

pub const MC_SEED: u64 = 20_240_601;

pub fn run(level: Level) -> Result<Vec<Check>> {
    let b = level.bounds();
    let mut out = Vec::new();

    let profile = w_profile(b.w_x)?;
    let g = g_sieve(0, b.w_x)?;
    let mut s2 = 0u64;
    let mut w_fail = None;
    for x in 1..=b.w_x {
        s2 += u64::from(g.get(x).unwrap_or(0)).pow(2);
        let id = profile.at(x);
        if id.w != s2 || !id.consistent() {
            w_fail = Some((x, id, s2));
            break;
        }
    }
    out.push(match w_fail {
        None => check(
            format!(
                "W = sum g^2 = 2W_le - W_diag, W2 direct = modular, x <= {}",
                b.w_x
            ),
            true,
            profile.at(b.w_x).w,
            s2,
        ),
        Some((x, id, s2)) => check(
            format!("W identities at x = {x}"),
            false,
            format!(
                "W={} 2W_le-W_diag={} W2d={}",
                id.w,
                2 * id.w_le - id.w_diag,
                id.w2_direct
            ),
            format!("sum g^2={s2} W2m={}", id.w2_modular),
        ),
    });

    let rho_bad = (1..=b.rho_delta).find_map(|d| {
        let (c, r) = (rho_closed(d).rho, rho_bruteforce(d).ok()?.rho);
        (c != r).then_some((d, c, r))
    });
    out.push(match rho_bad {
        None => check(
            format!("rho closed = brute, Delta <= {}", b.rho_delta),
            true,
            "all",
            "all",
        ),
        Some((d, c, r)) => check(format!("rho({d}) closed = brute"), false, c, r),
    });

    let rho_bound_bad = (1..=b.rho_delta).find(|&d| rho_closed(d).rho > 2 * d * tau(d));
    out.push(check(
        format!("rho <= 2 Delta tau(Delta), Delta <= {}", b.rho_delta),
        rho_bound_bad.is_none(),
        rho_bound_bad.map_or("none".into(), |d| {
            format!("rho({d}) = {}", rho_closed(d).rho)
        }),
        "violations: none",
    ));

    let mut worst = 0.0f64;
    for d in 1..=b.gauss_delta {
        let exact = rho_closed(d).rho as f64;
        worst = worst.max((rho_via_gauss(d)? - exact).abs() / exact);
    }
    out.push(check(
        format!("Gauss-sum rho, Delta <= {}", b.gauss_delta),
        worst <= 1e-6,
        format!("max rel err {worst:.2e}"),
        "1e-6",
    ));

    let partial = rho_series_partial(b.series_n);
    let residual = rho_series_limit() - partial;
    let tail = rho_series_tail_bound(b.series_n);
    out.push(check(
        format!("series residual at N = {}", b.series_n),
        (0.0..=tail).contains(&residual),
        format!("{residual:.3e}"),
        format!("<= {tail:.3e}"),
    ));

    for &x in b.moment_xs {
        let r = compute_moments(x)?;
        out.push(check(
            format!("theta in [0,1] at x = {x}"),
            (0.0..=1.0).contains(&r.theta),
            format!("{:.6}", r.theta),
            "[0, 1]",
        ));
        let rhs = bound_2_rhs(x);
        out.push(check(
            format!("S2_g, S2_T <= ceiling at x = {x}"),
            (r.s2_g as f64) <= rhs && (r.s2_t as f64) <= rhs,
            format!("{} / {}", r.s2_g, r.s2_t),
            format!("{rhs:.1}"),
        ));
    }

    let gt = g_sieve(0, b.hickerson_d)?;
    let ts = periods(0, b.hickerson_d)?;
    let t_bad = gt.iter().zip(&ts).find(|&((_, g), &t)| t > u64::from(g));
    out.push(match t_bad {
        None => check(
            format!("T(d) <= g(d), d <= {}", b.hickerson_d),
            true,
            "all",
            "all",
        ),
        Some(((d, g), t)) => check(format!("T({d}) <= g({d})"), false, t, g),
    });

    for &x in b.markov_xs {
        for alpha in [0.25, 0.5, 1.0, 2.0] {
            let m = markov_check(x, alpha)?;
            out.push(check(
                format!("count_D alpha^2 x <= sum T^2, x = {x}, alpha = {alpha}"),
                m.holds(),
                m.lhs,
                m.tail_s2_t,
            ));
        }
    }

    let est = integrate_s(0.0, b.mc_samples, MC_SEED)?;
    let stderr_cap = if level == Level::Full {
        7e-4
    } else {
        f64::INFINITY
    };
    out.push(check(
        format!("S Monte Carlo, {} samples", b.mc_samples),
        est.within(s_exact(), 3.0) && est.stderr <= stderr_cap,
        format!("{:.7} +- {:.1e}", est.mean, est.stderr),
        format!("{:.10}", s_exact()),
    ));

    let c = constants();
    out.push(check(
        "c0 = 13 zeta(2) S / (14 zeta(3)), c1 = 3 c0",
        c.c1 == 3.0 * c.c0 && (c.c0 - 1.221_011_354_368_155_6).abs() <= 1e-6,
        format!("{:.10}", c.c0),
        "1.2210113544",
    ));

    Ok(out)
}
