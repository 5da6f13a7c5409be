mod commands;
mod cover_file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Read(String, #[source] std::io::Error),
    #[error("cannot write {0}: {1}")]
    Write(String, #[source] std::io::Error),
    #[error("{0}: {1}")]
    Graph(String, #[source] lincom::GraphError),
    #[error(transparent)]
    Config(#[from] lincom::ConfigError),
    #[error(transparent)]
    Harness(#[from] lincom::harness::HarnessError),
    #[error("node {0:?} is not in the graph")]
    UnknownNode(String),
    #[error("node {0:?} appears twice in the cover")]
    DuplicateNode(String),
    #[error("cover line {0}: expected `node<TAB>community`, got {1:?}")]
    CoverLine(usize, String),
    #[error("cover is missing {} node(s): {}", .0.len(), .0.join(", "))]
    MissingNodes(Vec<String>),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Ins,
    Cond,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhaseArg {
    Traversal,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "lincom", version, about = "Traversal-based community detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "ins")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0.75)]
    pub threshold: f64,
    /// Start node label, or `auto` for the lowest-degree node.
    #[arg(long, default_value = "auto")]
    pub start: String,
    #[arg(long)]
    pub skip_modmax: bool,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub cover: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1.0")]
    pub fractions: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "ins")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "traversal")]
    pub phase: PhaseArg,
    #[arg(long, default_value_t = 0.75)]
    pub threshold: f64,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepThresholdArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.4)]
    pub from: f64,
    #[arg(long, default_value_t = 0.85)]
    pub to: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepStartArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `all`, or the number of start nodes to sample.
    #[arg(long, default_value = "all")]
    pub sample: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.75)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value = "ins")]
    pub method: MethodArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect communities and write a cover file.
    Detect(DetectArgs),
    /// Score an existing cover.
    Eval(EvalArgs),
    /// Time runs on edge samples and fit time against edge count.
    Bench(BenchArgs),
    /// Run detection over a range of INS thresholds.
    SweepThreshold(SweepThresholdArgs),
    /// Run detection from many start nodes.
    SweepStart(SweepStartArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(a) => commands::detect(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Bench(a) => commands::bench(&a),
        Command::SweepThreshold(a) => commands::sweep_threshold(&a),
        Command::SweepStart(a) => commands::sweep_start(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
