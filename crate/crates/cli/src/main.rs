mod commands;
mod config;
mod error;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use linkforge_core::{SeedKind, Task};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "linkforge", version, about = "Planar linkage enumeration, simulation, datasets and synthesis")]
pub struct Cli {
    /// Global RNG seed [default: $LINKFORGE_SEED, else 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 means one per core
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// TOML config file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overwrite existing outputs
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    All,
    Train,
    Test,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate, filter and deduplicate mechanism graphs; print the count table
    Enumerate {
        #[arg(long, default_value_t = 5)]
        layers: usize,
        #[arg(long, default_value = "revolute")]
        seed_kind: SeedKind,
        /// Directory for catalog.jsonl and report.json
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace an instance of a catalog graph over one crank revolution
    Simulate {
        /// catalog.jsonl, or a directory containing it
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        id: String,
        /// Instance JSON file
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        steps: Option<usize>,
        /// Trajectory JSON output [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render the curve image here
        #[arg(long)]
        curve_png: Option<PathBuf>,
        /// Also render the mechanism image here
        #[arg(long)]
        mech_png: Option<PathBuf>,
        #[arg(long)]
        img: Option<u32>,
    },
    /// Sample instances and write paired curve/mechanism images
    GenDataset {
        #[arg(long)]
        catalog: PathBuf,
        /// Comma-separated graph ids, or `all`
        #[arg(long, default_value = "all")]
        graphs: String,
        #[arg(long)]
        per_graph: Option<usize>,
        /// Image side in pixels
        #[arg(long)]
        img: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// PSNR of predicted images against ground truth, per manifest sample
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        task: Task,
        #[arg(long, value_enum, default_value_t = SplitArg::All)]
        split: SplitArg,
        /// Line-delimited JSON report
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a mechanism to a target curve by retrieval and refinement
    Synthesize {
        /// Curve PNG, or a trajectory JSON from `simulate`
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        topk: Option<usize>,
        /// Objective evaluations per candidate
        #[arg(long)]
        evals: Option<usize>,
        #[arg(long)]
        img: Option<u32>,
        /// Directory for instance.json, mechanism.png, curve.png, result.json
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_error(e: clap::Error) -> i32 {
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = e.print();
            0
        }
        kind => {
            let _ = e.print();
            let msg = e.render().to_string().lines().next().unwrap_or_default().to_string();
            let err = match kind {
                ErrorKind::MissingRequiredArgument
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    CliError::Usage(kind.as_str().unwrap_or("missing argument").to_string())
                }
                _ => CliError::Validation(msg),
            };
            eprintln!("{}", err.json_line());
            err.exit_code()
        }
    }
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => match commands::run(cli) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("{}", e.json_line());
                e.exit_code()
            }
        },
        Err(e) => parse_error(e),
    };
    std::process::exit(code);
}
