//! `m2magg`: sweeps and simulations of hierarchical M2M aggregation as CSV.

mod commands;
mod config;
mod error;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{CoverageArgs, EnergySweepArgs, HopsArgs, RateCdfArgs, SimulateArgs, TradeoffArgs};
use config::ConfigArgs;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "m2magg", version, about = "Energy, coverage, rate and hop-count curves for hierarchical M2M aggregation")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    /// Run directory receiving `<command>.csv` and `manifest.json`
    #[arg(long, global = true, default_value = "m2magg-out")]
    out: PathBuf,
    /// Also write a gnuplot script next to the CSV
    #[arg(long, global = true)]
    plot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Total energy density over γ for each K, with the optimum marked
    EnergySweep(EnergySweepArgs),
    /// SIR coverage P(SIR > T) per transmission mode
    Coverage(CoverageArgs),
    /// Rate coverage P(R > ρ) per mode, K and power cap
    RateCdf(RateCdfArgs),
    /// Upper and lower bounds on the number of hops
    Hops(HopsArgs),
    /// Outage against energy density per mode
    Tradeoff(TradeoffArgs),
    /// Monte Carlo experiments
    Simulate(SimulateArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = cli.config.resolve()?;
    let run = match &cli.command {
        Command::EnergySweep(a) => commands::energy_sweep(&cfg, a)?,
        Command::Coverage(a) => commands::coverage(&cfg, a)?,
        Command::RateCdf(a) => commands::rate_cdf(&cfg, a)?,
        Command::Hops(a) => commands::hops(&cfg, a)?,
        Command::Tradeoff(a) => commands::tradeoff(&cfg, a)?,
        Command::Simulate(a) => commands::simulate(&cfg, a)?,
    };
    let plot = if cli.plot { run.plot } else { None };
    for p in output::write_run(&cli.out, &run.spec, &run.table, plot, start.elapsed())? {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
