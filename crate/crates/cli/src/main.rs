//! `ratchet`: command-line front end for the delta-kicked quantum ratchet
//! toolkit. Every analysis is a subcommand writing CSV data files plus JSON
//! metadata sidecars; exit codes are 0 (success), 2 (config error) and
//! 3 (runtime guard violation).

mod commands;
mod config;
mod output;
mod presets;

use clap::{Args, Parser, Subcommand};
use commands::CliError;
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ratchet", version, about = "Delta-kicked quantum ratchet simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML run configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Output directory for CSV files and sidecars.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: machine parallelism).
    #[arg(long)]
    threads: Option<usize>,
    /// Named parameter preset (fig1a..fig4, bands).
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Ratchet current vs kick number for a list of kick amplitudes.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the number of kicks.
        #[arg(long)]
        kicks: Option<u64>,
    },
    /// Final-time current vs hbar_eff or kick amplitude, with peak catalog.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classical phase portraits and chaotic-fraction estimates.
    Classical {
        #[command(flatten)]
        common: CommonArgs,
        /// Bisect for the kick strength reaching the chaotic-fraction target.
        #[arg(long)]
        find_threshold: bool,
    },
    /// Bloch band counts below the potential barrier, with power-law fit.
    Bands {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Acceleration rate Gamma = <k>/l against P for each hbar_eff.
    Gamma {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn load_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    if let Some(name) = &common.preset {
        return Ok(presets::preset(name)?);
    }
    if let Some(path) = &common.config {
        return Ok(RunConfig::from_path(path)?);
    }
    Ok(RunConfig::default())
}

fn set_threads(common: &CommonArgs) -> Result<(), CliError> {
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(CliError::Config("threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve { common, kicks } => {
            set_threads(&common)?;
            let config = load_config(&common)?;
            let mut section = config.evolve.unwrap_or_default();
            if let Some(kicks) = kicks {
                section.kicks = kicks;
            }
            commands::cmd_evolve(&section, &common.out)
        }
        Command::Scan { common } => {
            set_threads(&common)?;
            let config = load_config(&common)?;
            let section = config.scan.unwrap_or_default();
            commands::cmd_scan(&section, &common.out)
        }
        Command::Classical {
            common,
            find_threshold,
        } => {
            set_threads(&common)?;
            let config = load_config(&common)?;
            let mut section = config.classical.unwrap_or_default();
            if find_threshold {
                section.find_threshold = true;
            }
            commands::cmd_classical(&section, &common.out)
        }
        Command::Bands { common } => {
            set_threads(&common)?;
            let config = load_config(&common)?;
            let section = config.bands.unwrap_or_default();
            commands::cmd_bands(&section, &common.out)
        }
        Command::Gamma { common } => {
            set_threads(&common)?;
            let config = load_config(&common)?;
            let section = config.gamma.unwrap_or_default();
            commands::cmd_gamma(&section, &common.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            match err {
                CliError::Config(_) => ExitCode::from(2),
                CliError::Guard(_) => ExitCode::from(3),
                CliError::Io(_) => ExitCode::from(1),
            }
        }
    }
}
