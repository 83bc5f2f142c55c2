//! `dunkl`: spectra, wavefunction samples, overlap tables and algebra
//! verification reports for the two-dimensional Dunkl oscillator.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification
//! failure (a residual or cross-oracle discrepancy above tolerance).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::WavefunctionKind;
use config::{OutputFormat, PartialConfig};

#[derive(Parser)]
#[command(
    name = "dunkl",
    version,
    about = "Two-dimensional Dunkl oscillator: spectra, wavefunctions, overlap tables, algebra checks"
)]
struct Cli {
    /// Flat `key = value` config file; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Deformation parameter mu_x (> -1/2).
    #[arg(long, global = true)]
    mu_x: Option<f64>,

    /// Deformation parameter mu_y (> -1/2).
    #[arg(long, global = true)]
    mu_y: Option<f64>,

    /// Highest energy level to process.
    #[arg(long, global = true)]
    level_max: Option<u32>,

    /// Quadrature nodes per dimension (>= 8).
    #[arg(long, global = true)]
    nodes: Option<usize>,

    /// Verification tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energies, state labels and degeneracies per level.
    Spectrum,
    /// Sample a wavefunction on a grid.
    Wavefunction {
        /// Which separated family to sample.
        #[arg(long, value_enum)]
        kind: WavefunctionKind,
        /// Quantum numbers: cartesian "NX,NY"; polar "K,N,SX,SY"
        /// (e.g. "0,1/2,+,-"); jacobi-dunkl "N,EPSILON,BRANCH" (e.g. "1,+,+").
        #[arg(long)]
        index: String,
        /// Sample grid MIN:MAX:COUNT per axis (polar: radial axis; the
        /// angle takes COUNT equispaced values on [0, 2pi)).
        #[arg(long, default_value = "-3:3:25", allow_hyphen_values = true)]
        grid: String,
    },
    /// Cartesian <-> polar overlap tables from all three routes, with
    /// cross-oracle discrepancies.
    Overlaps {
        /// Energy level N (must not exceed --level-max).
        #[arg(long)]
        level: u32,
    },
    /// Verify the operator identities; one line per identity.
    Check,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap's own help/version paths exit 0; anything else is usage
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let from_file = match &cli.config {
        Some(path) => PartialConfig::from_file(path)?,
        None => PartialConfig::default(),
    };
    let from_flags = PartialConfig {
        mu_x: cli.mu_x,
        mu_y: cli.mu_y,
        level_max: cli.level_max,
        nodes: cli.nodes,
        tol: cli.tol,
        format: cli.format,
        out: cli.out.clone(),
    };
    let cfg = from_file.overridden_by(from_flags).finalize()?;

    match cli.command {
        Command::Spectrum => commands::cmd_spectrum(&cfg),
        Command::Wavefunction { kind, index, grid } => {
            commands::cmd_wavefunction(&cfg, kind, &index, &grid)
        }
        Command::Overlaps { level } => commands::cmd_overlaps(&cfg, level),
        Command::Check => commands::cmd_check(&cfg),
    }
}
