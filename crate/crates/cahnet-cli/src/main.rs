//! `cahnet` — delay-driven feedback-bit and transmit-power control for
//! underlay cognitive ad hoc networks, on the command line.
//!
//! Exit codes are stable across commands: 0 success, 1 usage or
//! configuration error, 2 infeasible control problem, 3 numerical
//! failure.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cahnet::config::load_config;
use cahnet::Error;

use report::RunManifest;

#[derive(Parser)]
#[command(
    name = "cahnet",
    version,
    about = "Joint feedback-bit and transmit-power control for cognitive ad hoc networks",
    after_help = "Exit codes: 0 success, 1 usage/config error, 2 infeasible, 3 numerical failure."
)]
struct Cli {
    /// Scenario file (TOML, keys matching ScenarioConfig)
    #[arg(long, global = true, default_value = "configs/default.toml")]
    config: PathBuf,

    #[command(subcommand)]
    command: Command,
}

/// Bit-allocation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Greedy allocation: one bit at a time to the largest gain.
    Ga,
    /// Exhaustive search: certified minimum total, smallest total first.
    Ea,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Ga => "ga",
            Method::Ea => "ea",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario: minimum powers, then feedback-bit allocation
    Control {
        /// Override the scenario's interference budget
        #[arg(long)]
        aic: Option<f64>,
        /// Allocation method
        #[arg(long, value_enum, default_value_t = Method::Ga)]
        method: Method,
        /// Also write the plan as CSV to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a solved scenario by Monte Carlo simulation
    Mc {
        /// Allocation method
        #[arg(long, value_enum, default_value_t = Method::Ga)]
        method: Method,
        /// Number of simulated coherence intervals
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Master RNG seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also write the summary as CSV to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bit-allocation table over an AIC grid, both methods per point
    ReproduceTable1 {
        /// Comma-separated interference budgets
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.01, 0.02, 0.03, 0.04])]
        aic_list: Vec<f64>,
        /// Write the table as CSV to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical vs analytical interference over an AIC grid (CSV)
    ReproduceFig2 {
        /// Comma-separated interference budgets
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.01, 0.02, 0.03, 0.04])]
        aic_list: Vec<f64>,
        /// Monte Carlo trials per (aic, method) row
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Master RNG seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate each link's queue at minimum power and check its delay
    QueueCheck {
        /// Simulated coherence intervals per link
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        intervals: u64,
        /// Master RNG seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Scale factor on every link's simulated power (stress knob;
        /// the power column reports the scaled value actually used)
        #[arg(long, default_value_t = 1.0)]
        power_scale: f64,
        /// Scale factor on every link's delay budget (stress knob)
        #[arg(long, default_value_t = 1.0)]
        delay_scale: f64,
        /// Also write the verdicts as CSV to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; everything else
            // is a usage error.
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    if err.is_infeasible() {
        return 2;
    }
    match err {
        Error::Config { .. } | Error::Io { .. } => 1,
        _ => 3,
    }
}

fn run(cli: Cli) -> cahnet::Result<u8> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Control { aic, method, out } => {
            let manifest =
                RunManifest::new(&cli.config, "control", &config).with_output(out.as_deref());
            commands::cmd_control(&config, &manifest, aic, method)
        }
        Command::Mc {
            method,
            trials,
            seed,
            out,
        } => {
            let manifest = RunManifest::new(&cli.config, "mc", &config)
                .with_seed(seed)
                .with_trials("trials", trials)
                .with_output(out.as_deref());
            commands::cmd_mc(&config, &manifest, method, trials, seed)
        }
        Command::ReproduceTable1 { aic_list, out } => {
            let manifest = RunManifest::new(&cli.config, "reproduce-table1", &config)
                .with_output(out.as_deref());
            commands::cmd_reproduce_table1(&config, &manifest, &aic_list)
        }
        Command::ReproduceFig2 {
            aic_list,
            trials,
            seed,
            out,
        } => {
            let manifest = RunManifest::new(&cli.config, "reproduce-fig2", &config)
                .with_seed(seed)
                .with_trials("trials", trials)
                .with_output(out.as_deref());
            commands::cmd_reproduce_fig2(&config, &manifest, &aic_list, trials, seed)
        }
        Command::QueueCheck {
            intervals,
            seed,
            power_scale,
            delay_scale,
            out,
        } => {
            let manifest = RunManifest::new(&cli.config, "queue-check", &config)
                .with_seed(seed)
                .with_trials("intervals", intervals)
                .with_output(out.as_deref());
            commands::cmd_queue_check(
                &config,
                &manifest,
                intervals,
                seed,
                power_scale,
                delay_scale,
            )
        }
    }
}
