use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gbflts::error::{Error, Result};
use gbflts::gb::{evolve, SolverConfig};
use gbflts::harness::{parse_study_config, run_convergence, write_report, RunStatus};
use gbflts::io::{load, save, StateMeta};
use gbflts::oracles::{reference, OracleConfig, OracleMethod};
use gbflts::roughdata::{generate, PsiMode, RoughDataSpec, GENERATOR_VERSION};
use gbflts::spectral::Cutoff;

/// Filtered Lie-Trotter splitting for the good Boussinesq equation.
#[derive(Parser)]
#[command(name = "gbflts", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate normalized rough initial data.
    Gen {
        #[arg(long)]
        s: f64,
        #[arg(long = "M")]
        grid_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "zero")]
        psi: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate a state file with FLTS up to time T.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tau: f64,
        #[arg(long = "T")]
        final_time: f64,
        #[arg(long)]
        no_filter: bool,
        #[arg(long)]
        no_nonlinearity: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a convergence study described by a key=value file.
    Converge {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compute a reference solution with an independent integrator.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "rk4")]
        method: String,
        #[arg(long = "tau-ref", default_value_t = 1e-4)]
        tau_ref: f64,
        #[arg(long = "T")]
        final_time: f64,
        /// Integrate the system projected with this step's cutoff.
        #[arg(long = "filter-tau")]
        filter_tau: Option<f64>,
        #[arg(long)]
        no_nonlinearity: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { s, grid_size, seed, psi, out } => {
            if !grid_size.is_power_of_two() {
                return Err(Error::InvalidConfig(format!("M must be a power of two, got {grid_size}")));
            }
            let psi_mode: PsiMode = psi.parse()?;
            let state = generate(&RoughDataSpec { s, grid_size, seed, psi_mode })?;
            let meta = StateMeta { seed: Some(seed), s: Some(s), psi_mode: Some(psi_mode), ..Default::default() };
            save(&out, &state, &meta)?;
            println!("seed={seed} s={s} M={grid_size} psi={psi_mode} generator={GENERATOR_VERSION}");
        }
        Command::Solve { input, tau, final_time, no_filter, no_nonlinearity, out } => {
            let (state, meta) = load(&input)?;
            let cfg = SolverConfig::new(tau, final_time, state.grid().len())
                .with_filter(!no_filter)
                .with_nonlinearity(!no_nonlinearity)
                .with_seed(meta.seed.unwrap_or(0));
            let result = evolve(&state, &cfg)?;
            let meta = StateMeta { time: meta.time + final_time, ..meta };
            save(&out, &result, &meta)?;
            println!("seed={} tau={tau:e} T={final_time} steps={}", seed_str(&meta), cfg.steps()?);
        }
        Command::Converge { config } => {
            let text = fs::read_to_string(&config)?;
            let spec = parse_study_config(&text)?;
            let csv = spec.output.clone().unwrap_or_else(|| config.with_extension("csv"));
            let report = run_convergence(&spec)?;
            let paths = write_report(&report, &csv)?;
            println!("seed={} M={} T={} reference={}", report.seed, report.grid_size, report.final_time, report.reference);
            for f in &report.fits {
                match f.order {
                    Some(p) => println!("s={} order={p:.4} points={}", f.s, f.points),
                    None => println!("s={} order=insufficient points ({})", f.s, f.points),
                }
            }
            println!("wrote {} {} {}", paths.csv.display(), paths.plot.display(), paths.meta.display());
            if report.rows.iter().any(|r| r.status == RunStatus::BlowUp) {
                eprintln!("warning: some runs blew up; see the status column");
                return Ok(ExitCode::from(3));
            }
        }
        Command::Oracle { input, method, tau_ref, final_time, filter_tau, no_nonlinearity, out } => {
            let (state, meta) = load(&input)?;
            let method: OracleMethod = method.parse()?;
            let filter = filter_tau.map(Cutoff::from_tau).transpose()?;
            let cfg = OracleConfig { method, tau_ref, grid_size: state.grid().len(), nonlinearity_enabled: !no_nonlinearity, filter };
            let result = reference(&state, &cfg, final_time)?;
            let meta = StateMeta { time: meta.time + final_time, ..meta };
            save(&out, &result, &meta)?;
            println!("seed={} method={method} T={final_time}", seed_str(&meta));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn seed_str(meta: &StateMeta) -> String {
    meta.seed.map_or_else(|| "none".to_string(), |s| s.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
