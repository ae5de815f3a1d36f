//! `jumpexec`: coefficients, HJB surfaces and strategy simulations from a
//! JSON run configuration.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jumpexec_core::Lookup;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "jumpexec",
    version,
    about = "Optimal execution under jump-diffusion midprice dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Print the effective coefficients as JSON.
    Coeffs(ConfigArg),
    /// Solve for the h surface and write it with its metadata.
    Solve {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate the strategy on a solved surface.
    Simulate {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        out: PathBuf,
        /// Directory holding the solved surface (defaults to --out).
        #[arg(long)]
        surface: Option<PathBuf>,
        /// Overrides sim.n_paths.
        #[arg(long)]
        paths: Option<u64>,
        /// Overrides sim.base_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Interpolate h linearly in the price instead of using the nearest node.
        #[arg(long)]
        interp: bool,
    },
    /// Summarise a simulation output directory.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coeffs(c) => commands::coeffs(&RunConfig::load(&c.config)?),
        Command::Solve { config, out } => commands::solve(&RunConfig::load(&config.config)?, &out),
        Command::Simulate {
            config,
            out,
            surface,
            paths,
            seed,
            interp,
        } => {
            let mut run_config = RunConfig::load(&config.config)?;
            if let Some(n) = paths {
                run_config.sim.n_paths = n;
            }
            if let Some(s) = seed {
                run_config.sim.base_seed = s;
            }
            let lookup = if interp {
                Lookup::LinearInS
            } else {
                Lookup::Nearest
            };
            let surface_dir = surface.unwrap_or_else(|| out.clone());
            commands::simulate(&run_config, &surface_dir, &out, lookup)
        }
        Command::Report { out } => commands::report(&out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
