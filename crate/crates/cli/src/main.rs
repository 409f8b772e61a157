//! `rigiscope`: analyze graphs, check the rank bounds, search for
//! counterexamples and write named graphs.
//!
//! Exit codes: 0 success, 1 bad input or flags, 2 contract violation,
//! 3 internal error, 10 counterexample found, 20 bound violated.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rigiscope::Error;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Parser, Debug)]
#[command(name = "rigiscope", version, about = "Combinatorial rigidity toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counts, rank, maximal sets and component structure of one graph.
    Analyze(AnalyzeArgs),
    /// Check a rank bound on one graph or the builtin corpus.
    Verify(VerifyArgs),
    /// Search a seeded graph stream for a counterexample.
    Search(SearchArgs),
    /// Write a named graph (and its cover) to files.
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Dimension.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Seed in hex (`0x` prefix optional).
    #[arg(long, env = "RIGISCOPE_SEED", value_parser = parse_seed)]
    pub seed: Option<u64>,
    /// Random placements per rank query.
    #[arg(long, default_value_t = 2)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Cap on enumerated maximal sets.
    #[arg(long, default_value_t = 100_000)]
    pub cap_enum: usize,
    /// Largest graph order for exhaustive vertex-subset scans.
    #[arg(long, default_value_t = rigiscope::covers::DEFAULT_SCAN_CAP)]
    pub cap_scan: usize,
}

impl Common {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Args, Debug, Clone)]
#[group(required = false, multiple = false)]
pub struct Source {
    /// Edge-list file.
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Named generator followed by its numeric arguments.
    #[arg(long = "gen", value_name = "NAME [ARGS]", num_args = 1..)]
    pub generator: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    /// Use the hinged variant of the double banana.
    #[arg(long)]
    hinge: bool,
    /// Cover file to use instead of the computed components.
    #[arg(long, value_name = "PATH")]
    cover: Option<PathBuf>,
    /// Random greedy orders for the maximal-set sizes.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Theorem::Main)]
    theorem: Theorem,
    /// Run over a corpus instead of one graph.
    #[arg(long, value_enum)]
    corpus: Option<CorpusName>,
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    hinge: bool,
    /// Cover file (for the bounds that take a cover).
    #[arg(long, value_name = "PATH")]
    cover: Option<PathBuf>,
    /// Check every maximal set instead of a sample.
    #[arg(long)]
    all: bool,
    /// Random greedy orders when sampling.
    #[arg(long, default_value_t = rigiscope::verify::DEFAULT_SAMPLE)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    conjecture: String,
    /// Largest random graph order.
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Graphs to examine.
    #[arg(long, default_value_t = 500)]
    budget: usize,
    /// Random greedy orders per graph.
    #[arg(long, default_value_t = 8)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long = "gen", value_name = "NAME [ARGS]", num_args = 1.., required = true)]
    generator: Vec<String>,
    #[arg(long)]
    hinge: bool,
    /// Graph output path (default: stdout).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Cover output path.
    #[arg(long, value_name = "PATH")]
    cover: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    Main,
    WeakRankIe,
    RankIe,
    ProperMaximal,
    #[value(name = "complete-2thin")]
    Complete2thin,
    #[value(name = "proper-complete-2thin")]
    ProperComplete2thin,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusName {
    Builtin,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(digits, 16).map_err(|e| format!("`{s}` is not a hex seed: {e}"))
}

/// What a command produced: text for stdout and the exit code.
pub struct Outcome {
    pub output: String,
    pub code: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } => 1,
        Error::Contract(_) => 2,
        Error::Internal(_) => 3,
    }
}

fn run(cli: Cli) -> rigiscope::Result<Outcome> {
    let common = match &cli.command {
        Command::Analyze(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Search(a) => &a.common,
        Command::Generate(a) => &a.common,
    };
    if let Some(jobs) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Analyze(a) => {
            commands::analyze(&a.source, a.hinge, a.cover.as_deref(), a.samples, &a.common)
        }
        Command::Verify(a) => commands::verify(&commands::VerifyRequest {
            theorem: a.theorem,
            corpus: a.corpus,
            source: &a.source,
            hinge: a.hinge,
            cover: a.cover.as_deref(),
            all: a.all,
            samples: a.samples,
            common: &a.common,
        }),
        Command::Search(a) => commands::search(&a.conjecture, a.n, a.budget, a.samples, &a.common),
        Command::Generate(a) => commands::generate(
            &a.generator,
            a.hinge,
            a.out.as_deref(),
            a.cover.as_deref(),
            &a.common,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(outcome)) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.code)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => ExitCode::from(3),
    }
}
