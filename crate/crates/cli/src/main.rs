mod analyze;
mod bench;
mod generate;
mod output;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use cdel_core::engine::{PathRule, SolverConfig, Strategy};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact Cluster Deletion by bounded search trees.
#[derive(Parser, Debug)]
#[command(name = "cdel", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Cap on worker threads for batch work.
    #[arg(long, env = "CDEL_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide `--k`, or find the minimum when `--k` is omitted.
    Solve(solve::SolveArgs),
    /// Brute-force optimum for graphs with at most 18 vertices.
    Oracle(solve::OracleArgs),
    /// Write a generated instance as an edge list.
    #[command(subcommand)]
    Gen(generate::GenCommand),
    /// Structural reports, branching numbers and the configuration analysis.
    #[command(subcommand)]
    Analyze(analyze::AnalyzeCommand),
    /// Shortcut for `analyze bn`.
    Bn(analyze::BnArgs),
    /// Shortcut for `analyze configs`.
    EnumConfigs(analyze::ConfigArgs),
    /// Runs every strategy on seeded planted instances.
    Bench(bench::BenchArgs),
}

/// Flags shared by every command that runs the search.
#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value = "new1404")]
    pub strategy: Strategy,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// `guarded` branches only on paths with degree-2 interiors.
    #[arg(long, default_value = "guarded")]
    pub path_rule: PathRule,
    /// Check the structural claims at every B4 entry.
    #[arg(long)]
    pub audit: bool,
}

impl SearchArgs {
    pub fn config(&self) -> anyhow::Result<SolverConfig> {
        let mut cfg = SolverConfig::new(self.strategy);
        cfg.path_rule = self.path_rule;
        cfg.audit_lemmas = self.audit;
        if let Some(t) = self.timeout {
            cfg.timeout = Some(Duration::try_from_secs_f64(t).context("--timeout must be a non-negative number of seconds")?);
        }
        Ok(cfg)
    }
}

pub fn read_graph(path: &PathBuf) -> anyhow::Result<cdel_core::Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    cdel_core::io::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
    }
    let fmt = cli.format;
    match cli.command {
        Command::Solve(a) => solve::solve(&a, fmt),
        Command::Oracle(a) => solve::oracle(&a, fmt),
        Command::Gen(c) => generate::run(&c, fmt),
        Command::Analyze(c) => analyze::run(&c, fmt),
        Command::Bn(a) => analyze::bn(&a, fmt),
        Command::EnumConfigs(a) => analyze::configs(&a, fmt),
        Command::Bench(a) => bench::run(&a, fmt),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
