//! Command-line front end for the teleportation-under-dephasing toolkit:
//! benchmark curve tables, the protected-pair atlas, self-check oracles,
//! timing-mismatch scans, and single protocol runs.

mod commands;
mod config;
mod csvout;
mod opts;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::ScenarioConfig;
use opts::RunOptions;

#[derive(Parser)]
#[command(
    name = "telsim",
    version,
    about = "Exact two-step teleportation under dephasing: tables, scans, and self-checks"
)]
struct Cli {
    /// Configuration file (INI-style sections; flags override its values).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file path (overrides the config and the default location).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Base seed for every randomized ingredient.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Suppress summary lines (data output is never suppressed).
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the spin-boson fidelity benchmark curves as CSV.
    Fig2,
    /// List every protected coherence pair per carrier dimension as CSV.
    Atlas,
    /// Run the self-check battery; exit 2 if any deviation exceeds its threshold.
    Oracle,
    /// Scan the protected class over a window-duration mismatch as CSV.
    Mismatch,
    /// Run the two-step protocol once and print every measurement branch.
    Protocol,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ScenarioConfig::parse(&text)?
        }
        None => ScenarioConfig::default(),
    };
    let opts = RunOptions {
        seed: cli.seed.or(config.model.seed).unwrap_or(0),
        out: cli.out.clone().or_else(|| config.output.out.clone().map(PathBuf::from)),
        quiet: cli.quiet || config.output.quiet.unwrap_or(false),
    };
    let code = match cli.command {
        Command::Fig2 => commands::fig2::run(&config, &opts)?,
        Command::Atlas => commands::atlas::run(&config, &opts)?,
        Command::Oracle => commands::oracle::run(&config, &opts)?,
        Command::Mismatch => commands::mismatch::run(&config, &opts)?,
        Command::Protocol => commands::protocol::run(&config, &opts)?,
    };
    Ok(code as u8)
}
