use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use sqrt_period::arith::{
    rho_closed, rho_series_limit, rho_series_partial, rho_series_tail_bound, tau,
};
use sqrt_period::cf::cf_period;
use sqrt_period::gcount::{g_of_d, g_sieve};
use sqrt_period::moments::{self, check_bound_2, compute_moments_chunked, markov_check};
use sqrt_period::squad::{self, constants, integrate_s, s_eps_convergence, s_exact};
use sqrt_period::wsum::{w_profile, W_CSV_HEADER};

mod manifest;
mod verify;

use manifest::ManifestBuilder;

/// Overrides the default worker count when `--threads` is absent.
const THREADS_ENV: &str = "SQRT_PERIOD_THREADS";

#[derive(Parser)]
#[command(
    name = "sqrt-period",
    version,
    about = "Periods of sqrt(d), g(d) and the second-moment checks"
)]
struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal period T(d) of the continued fraction of sqrt(d)
    Period { d: u64 },
    /// Hickerson's g(d); with --csv, the table of g over (0, d]
    Gd {
        d: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sums of g, g^2, T, T^2 over d <= x with theta and the second-moment ceiling
    Moments {
        x: u64,
        #[arg(long, default_value_t = sqrt_period::gcount::DEFAULT_CHUNK)]
        segment_size: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// W = sum g^2 three ways, and the windowed sum W2 by both counting routes
    W {
        x: u64,
        /// Write one row per level 1..=x
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// rho(Delta) table and the partial sum of rho(Delta)/Delta^3
    Rho {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
        max: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the cutoff integral S(eps)
    Integral {
        /// One or more cutoffs, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = verify::MC_SEED)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// #{d in (x, 2x] : T(d) > alpha sqrt(x)} and the Markov inequality
    Dcount { x: u64, alpha: f64 },
    /// S, c0, c1 as JSON
    Constants,
    /// Run the cross-check suite
    Verify {
        #[arg(value_enum)]
        level: verify::Level,
    },
}

fn thread_count(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var(THREADS_ENV).ok()?.parse().ok())
        .filter(|&n| n > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = thread_count(cli.threads) {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // domain errors from the library are usage errors
            if e.downcast_ref::<sqrt_period::Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Period { d } => {
            let r = cf_period(d)?;
            if r.is_square() {
                println!("d={d} T=0 (perfect square)");
            } else {
                println!("d={d} T={}", r.period);
            }
        }
        Command::Gd { d, csv } => {
            if d == 0 {
                return Err(sqrt_period::Error::ZeroDiscriminant.into());
            }
            println!("d={d} g={}", g_of_d(d));
            if let Some(path) = csv {
                let table = g_sieve(0, d)?;
                let mut buf = Vec::new();
                table.write_csv(&mut buf)?;
                ManifestBuilder::start("gd")
                    .param("d", d)
                    .write(&path, std::str::from_utf8(&buf)?)?;
            }
        }
        Command::Moments {
            x,
            segment_size,
            csv,
            json,
        } => {
            let r = compute_moments_chunked(x, segment_size)?;
            println!(
                "x={} S1_g={} S2_g={} S1_T={} S2_T={} theta={:.9} S2g/x^2={:.9} ceiling={}",
                r.x,
                r.s1_g,
                r.s2_g,
                r.s1_t,
                r.s2_t,
                r.theta,
                r.s2g_over_x2(),
                if check_bound_2(&r) { "ok" } else { "VIOLATED" }
            );
            let m = ManifestBuilder::start("moments")
                .param("x", x)
                .param("segment_size", segment_size);
            if let Some(path) = csv {
                m.write(
                    &path,
                    &format!("{}\n{}\n", moments::CSV_HEADER, r.csv_row()),
                )?;
            }
            if let Some(path) = json {
                m.write(&path, &(serde_json::to_string_pretty(&r)? + "\n"))?;
            }
        }
        Command::W { x, csv } => {
            let p = w_profile(x)?;
            let id = p.at(x);
            println!(
                "x={x} W={} W_diag={} W_le={} 2W_le-W_diag={} W2_direct={} W2_modular={}",
                id.w,
                id.w_diag,
                id.w_le,
                2 * id.w_le - id.w_diag,
                id.w2_direct,
                id.w2_modular
            );
            if let Some(path) = csv {
                let mut out = format!("{W_CSV_HEADER}\n");
                for level in 1..=x {
                    writeln!(out, "{}", p.at(level).csv_row())?;
                }
                ManifestBuilder::start("w")
                    .param("x", x)
                    .write(&path, &out)?;
            }
            if !id.consistent() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Rho { max, csv } => {
            let partial = rho_series_partial(max);
            println!(
                "N={max} partial={partial:.12} limit={:.12} residual={:.3e} tail_bound={:.3e}",
                rho_series_limit(),
                rho_series_limit() - partial,
                rho_series_tail_bound(max)
            );
            if let Some(path) = csv {
                let mut out = String::from("delta,rho,two_delta_tau\n");
                for d in 1..=u64::from(max) {
                    writeln!(out, "{d},{},{}", rho_closed(d).rho, 2 * d * tau(d))?;
                }
                ManifestBuilder::start("rho")
                    .param("max", max)
                    .write(&path, &out)?;
            }
        }
        Command::Integral {
            eps,
            samples,
            seed,
            csv,
        } => {
            let mut out = format!("{}\n", squad::CSV_HEADER);
            println!("{}", squad::CSV_HEADER);
            let mut notes = Vec::new();
            for &e in &eps {
                // cutoffs in (0, 1/2] also get the convergence ratio
                let est = if e > 0.0 && e <= 0.5 {
                    let row = s_eps_convergence(&[e], samples, seed)?[0];
                    notes.push(format!(
                        "# eps={e} |S(eps) - 2 ln^2 2|={:.3e} ratio={:.4}",
                        row.deviation, row.ratio
                    ));
                    row.estimate
                } else {
                    integrate_s(e, samples, seed)?
                };
                let row = squad::csv_row(e, &est);
                println!("{row}");
                writeln!(out, "{row}")?;
            }
            for n in notes {
                println!("{n}");
            }
            println!("# 2 ln^2 2 = {:.10}", s_exact());
            if let Some(path) = csv {
                let joined: Vec<String> = eps.iter().map(f64::to_string).collect();
                ManifestBuilder::start("integral")
                    .param("eps", joined.join(","))
                    .param("samples", samples)
                    .seed(seed)
                    .write(&path, &out)?;
            }
        }
        Command::Dcount { x, alpha } => {
            let m = markov_check(x, alpha)?;
            println!(
                "x={x} alpha={alpha} count={} count*alpha^2*x={} sum_T^2={} markov={}",
                m.count,
                m.lhs,
                m.tail_s2_t,
                if m.holds() { "ok" } else { "VIOLATED" }
            );
        }
        Command::Constants => {
            println!("{}", serde_json::to_string_pretty(&constants())?);
        }
        Command::Verify { level } => {
            let checks = verify::run(level)?;
            for c in &checks {
                println!(
                    "{} {:<60} {} | {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.lhs,
                    c.rhs
                );
            }
            if let Some(bad) = checks.iter().find(|c| !c.pass) {
                eprintln!("first failure: {}: {} vs {}", bad.name, bad.lhs, bad.rhs);
                return Ok(ExitCode::from(1));
            }
            println!("{} checks passed", checks.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}
