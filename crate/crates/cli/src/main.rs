//! Command-line front end: validates inequality specification files and
//! dispatches bound, search, grid and case-study computations.
//!
//! Exit codes: 0 ok, 2 invalid specification, 3 infeasible enumeration,
//! 4 case-study or check mismatch.

mod cases;
mod output;
mod specfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steerbound::bounds::corrected_bound;
use steerbound::dominance::{dominance_operator, sample_close_state, saturating_witness};
use steerbound::linalg::{min_eig, HermitianMatrix, Ket};
use steerbound::scenario::beta0_exact;
use steerbound::seesaw::{seesaw_lower_bound, SeesawOptions};

use cases::CaseName;
use output::{GridRow, OutputFormat};
use specfile::{GridSpec, InequalitySpec};

#[derive(Parser)]
#[command(
    name = "steerbound",
    version,
    about = "Bounds for quantum steering inequalities with imprecise measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for structured results (default: json; grid: csv).
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,

    /// Seed for all stochastic searches; runs are reproducible bit-for-bit.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Random restarts per seesaw branch.
    #[arg(long, global = true, default_value_t = 20)]
    restarts: usize,

    /// Allow the greedy assignment search above the enumeration cap.
    #[arg(long, global = true)]
    heuristic: bool,

    /// Cap on the number of enumerated deterministic Alice responses.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an inequality specification file.
    Validate { spec: PathBuf },
    /// Exact idealized LHS bound by enumeration over deterministic responses.
    Beta0 { spec: PathBuf },
    /// Imprecision-corrected upper bound (minimization over mu).
    Bound { spec: PathBuf },
    /// Seesaw lower bound from an explicit unsteerable strategy.
    Lhs { spec: PathBuf },
    /// Upper/lower bounds over an (eps1, eps2) grid; emits one row per point.
    Grid { grid: PathBuf },
    /// Scripted case studies with pass/fail reports.
    Case {
        #[arg(value_enum)]
        name: CaseName,
    },
    /// Dominance-certificate property sweep; prints worst-case values.
    LemmaCheck {
        /// Number of random (dimension, state, eps, mu) tuples.
        #[arg(long, default_value_t = 1000)]
        tuples: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // Enumeration-cap refusals get their own exit code so scripts can
            // retry with --heuristic.
            let infeasible = err
                .downcast_ref::<steerbound::Error>()
                .map(|e| matches!(e, steerbound::Error::EnumerationInfeasible { .. }))
                .unwrap_or(false);
            if infeasible {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn seesaw_options(cli: &Cli) -> SeesawOptions {
    SeesawOptions {
        restarts: cli.restarts.max(1),
        seed: cli.seed,
        cap: cli.cap,
        heuristic: cli.heuristic,
        ..SeesawOptions::default()
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let format = cli.output.unwrap_or(match cli.command {
        Command::Grid { .. } => OutputFormat::Csv,
        _ => OutputFormat::Json,
    });
    match &cli.command {
        Command::Validate { spec } => {
            let spec = InequalitySpec::load(spec)?;
            let lines = spec.validate()?;
            println!("valid");
            for line in lines {
                println!("  {line}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Beta0 { spec } => {
            let spec = InequalitySpec::load(spec)?;
            let f = spec.functional()?;
            let targets = spec.target_measurements()?;
            let opt = beta0_exact(&f, &targets, cli.cap)?;
            println!("{}", output::ideal_optimum(&opt, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { spec } => {
            let spec = InequalitySpec::load(spec)?;
            let f = spec.functional()?;
            let profile = spec.imprecision_profile()?;
            let beta0 = match spec.beta0 {
                Some(b0) => b0,
                None => {
                    let targets = spec.target_measurements()?;
                    beta0_exact(&f, &targets, cli.cap)?.result.value
                }
            };
            let bound = corrected_bound(&f, beta0, &profile)?;
            println!("{}", output::bound_result(&bound, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Lhs { spec } => {
            let spec = InequalitySpec::load(spec)?;
            let f = spec.functional()?;
            let targets = spec.target_measurements()?;
            let profile = spec.imprecision_profile()?;
            let strat = seesaw_lower_bound(&f, &targets, &profile, &seesaw_options(cli))?;
            println!("{}", output::strategy(&strat, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Grid { grid } => {
            let grid = GridSpec::load(grid)?;
            let rows = run_grid(&grid, cli)?;
            println!("{}", output::grid_rows(&rows, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Case { name } => {
            let report = cases::run(*name, cli.seed, cli.restarts)?;
            report.print();
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "case failed: {}",
                    report.first_failure().unwrap_or_default()
                );
                Ok(ExitCode::from(4))
            }
        }
        Command::LemmaCheck { tuples } => {
            let (worst_gap, worst_residual) = lemma_check(*tuples, cli.seed);
            println!("tuples: {tuples}");
            println!("worst min_eig(N - sigma): {worst_gap:e}");
            println!("worst saturating-witness residual: {worst_residual:e}");
            if worst_gap >= -1e-9 && worst_residual <= 1e-9 {
                println!("lemma check passed");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("lemma check FAILED");
                Ok(ExitCode::from(4))
            }
        }
    }
}

fn run_grid(grid: &GridSpec, cli: &Cli) -> anyhow::Result<Vec<GridRow>> {
    use steerbound::scenario::{ImprecisionProfile, SteeringFunctional, TargetMeasurements};
    use steerbound::targets::mub_pair;

    let d = grid.d;
    let f = SteeringFunctional::mub_correlation(d, 2);
    let targets = TargetMeasurements::from_family(&mub_pair(d));
    let beta0 = beta0_exact(&f, &targets, cli.cap)?.result.value;
    let opts = seesaw_options(cli);
    let (axis1, axis2) = grid.axes();

    let mut rows = Vec::with_capacity(axis1.len() * axis2.len());
    for &e1 in &axis1 {
        for &e2 in &axis2 {
            let profile = ImprecisionProfile::per_basis(&[e1, e2], d)?;
            let upper = corrected_bound(&f, beta0, &profile)?.value;
            let lower = seesaw_lower_bound(&f, &targets, &profile, &opts)?.value;
            rows.push(GridRow {
                eps1: e1,
                eps2: e2,
                upper,
                lower,
            });
        }
    }
    Ok(rows)
}

fn lemma_check(tuples: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_gap = f64::INFINITY;
    let mut worst_residual: f64 = 0.0;
    for trial in 0..tuples {
        let d = rng.gen_range(2..=16usize);
        let eps = rng.gen_range(0.0..=0.3f64).max(1e-12);
        let mu = rng.gen_range(-1.0..=5.0f64);
        let psi = loop {
            let amps: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            if let Ok(k) = Ket::normalized(amps) {
                break k;
            }
        };
        let cert = dominance_operator(&psi, eps, mu).expect("valid domain");
        let sigma = sample_close_state(&psi, eps, seed.wrapping_add(trial));
        let gap = HermitianMatrix::new(cert.n.as_matrix().sub(sigma.as_matrix()))
            .expect("difference of Hermitian matrices");
        worst_gap = worst_gap.min(min_eig(&gap));

        let (sigma_star, probe) = saturating_witness(&psi, eps, mu).expect("valid domain");
        let diff = cert.n.as_matrix().sub(sigma_star.as_matrix());
        let dv = diff.mul_vec(probe.amps());
        let residual: Complex64 = probe
            .amps()
            .iter()
            .zip(&dv)
            .map(|(a, b)| a.conj() * b)
            .sum();
        worst_residual = worst_residual.max(residual.norm());
    }
    (worst_gap, worst_residual)
}
