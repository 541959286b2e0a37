//! Argument surface and dispatch for the `greedymatch` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use greedymatch::SchedulerPolicy;

use crate::commands;
use crate::experiment;

#[derive(Debug, Parser)]
#[command(
    name = "greedymatch",
    version,
    about = "Distributed greedy weighted matching: simulate, check, compare"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph file
    Gen(GenArgs),
    /// Simulate the distributed protocol on one graph
    Run(RunArgs),
    /// Run the sequential greedy reference
    Seq(SeqArgs),
    /// Compute the exact optimal matching
    Opt(OptArgs),
    /// Batch runs with reference comparison and trace checks
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Human-readable lines
    Text,
    /// One header plus one comma-separated row per run
    Csv,
    /// One JSON object per run
    Jsonl,
}

fn parse_scheduler(s: &str) -> Result<SchedulerPolicy, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Family: path, cycle, star, complete, gnp, tree or bipartite
    pub kind: String,
    /// Vertex count
    pub n: usize,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// distinct | uniform | equal | adversarial | adversarial:BASE | list "2,3,2"
    #[arg(long, default_value = "distinct")]
    pub weights: String,
    /// Edge probability for gnp and bipartite
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Left side size for bipartite; defaults to n/2
    #[arg(long)]
    pub left: Option<usize>,
    /// Output file; stdout when absent
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Graph file
    pub graph: PathBuf,
    /// fifo | lifo | random | adversarial
    #[arg(long, default_value = "random", value_parser = parse_scheduler)]
    pub scheduler: SchedulerPolicy,
    /// Delivery seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Check the trace and compare against the sequential reference;
    /// any failure makes the exit status nonzero
    #[arg(long)]
    pub check: bool,
    /// Re-verify neighbor-set consistency after every delivery
    #[arg(long)]
    pub deep_check: bool,
    /// Write the event log here as JSON lines
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Largest vertex count for exact comparison in csv/jsonl rows
    #[arg(long, default_value_t = greedymatch::DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    /// Graph file
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct OptArgs {
    /// Graph file
    pub graph: PathBuf,
    /// Refuse graphs with more vertices than this
    #[arg(long, default_value_t = greedymatch::DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Graph file to include; repeatable
    #[arg(long = "graph")]
    pub graphs: Vec<PathBuf>,
    /// Generator family to include; repeatable
    #[arg(long = "family")]
    pub families: Vec<String>,
    /// Graphs generated per family
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Vertex count for generated graphs
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Weight policy for generated graphs
    #[arg(long, default_value = "distinct")]
    pub weights: String,
    /// Edge probability for gnp and bipartite families
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Left side size for bipartite; defaults to n/2
    #[arg(long)]
    pub left: Option<usize>,
    /// First generator seed; the i-th generated graph uses graph_seed + i
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
    /// Delivery seeds per graph and scheduler: 0..seeds
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// fifo | lifo | random | adversarial | all
    #[arg(long, default_value = "random")]
    pub scheduler: String,
    /// Skip trace checking
    #[arg(long)]
    pub no_check: bool,
    /// Largest vertex count for exact comparison; larger graphs report
    /// the optimum as unverified
    #[arg(long, default_value_t = greedymatch::DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write rows here instead of stdout; the summary then goes to stderr
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Runs one parsed invocation; the result is the process exit code.
/// 0 is success, 1 a failed check or comparison, 2 a usage or input error.
pub fn dispatch(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Gen(args) => commands::cmd_gen(&args),
        Command::Run(args) => commands::cmd_run(&args),
        Command::Seq(args) => commands::cmd_seq(&args),
        Command::Opt(args) => commands::cmd_opt(&args),
        Command::Experiment(args) => experiment::cmd_experiment(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    }
}
