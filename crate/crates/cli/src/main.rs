//! `wipt-sim`: preset and config-driven runs of the WIPT link simulator.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wipt_sim::run::{cmd_preset, cmd_run};
use wipt_sim::CliError;

#[derive(Parser)]
#[command(
    name = "wipt-sim",
    version,
    about = "Multi-antenna WIPT link simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the master seed from config or preset.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the Monte Carlo trial count.
    #[arg(long = "trials", global = true)]
    trials: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in preset (fig5 or fig6).
    Preset {
        /// Preset name: fig5 | fig6.
        name: String,

        /// Override a config key, e.g. --set rho=1.0 (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,

        /// Output CSV path (summary and config echo land next to it).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a key=value config file.
    Run {
        /// Path to the config file.
        #[arg(long)]
        config: PathBuf,

        /// Override a config key (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,

        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn split_overrides(raw: &[String]) -> Result<Vec<(String, String)>, CliError> {
    raw.iter()
        .map(|item| {
            item.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got `{item}`")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Preset { name, set, out } => split_overrides(set)
            .and_then(|overrides| cmd_preset(name, &overrides, out, cli.seed, cli.trials)),
        Command::Run { config, set, out } => split_overrides(set)
            .and_then(|overrides| cmd_run(config, out, &overrides, cli.seed, cli.trials)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("wipt-sim: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
