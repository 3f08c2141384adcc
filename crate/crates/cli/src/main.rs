mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use etpla_core::fabric::Strategy;

/// Design, simulate and stress-test e-textile PLA garments.
#[derive(Debug, Parser)]
#[command(name = "etpla", version)]
pub struct Cli {
    /// Pipeline configuration (TOML). Defaults to the shipped calibration.
    #[arg(long, global = true, env = "ETPLA_CONFIG")]
    pub config: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Layout strategy; overrides the config.
    #[arg(long, global = true, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Single,
    Multi,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Single => Strategy::Single,
            StrategyArg::Multi => Strategy::Multi,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize a truth table and map it onto a PLA matrix.
    Minimize { table: PathBuf },
    /// Place, route and expand a PLA matrix into a layout and netlists.
    Build { matrix: PathBuf },
    /// DC-solve a netlist for every input vector of a truth table.
    Simulate { netlist: PathBuf, table: PathBuf },
    /// Monte Carlo fault injection over a layout and its logical netlist.
    Faultmc {
        layout: PathBuf,
        netlist: PathBuf,
        table: PathBuf,
        /// Stretch the garment by the configured strain first.
        #[arg(long)]
        stretch: bool,
    },
    /// Render a layout as SVG.
    ExportSvg { layout: PathBuf },
    /// Run the whole pipeline on a table (the built-in use case by default).
    Validate { table: Option<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
