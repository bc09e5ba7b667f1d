//! `inlinescope`: measure, explain, and amplify compiler function inlining.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::LazyLock;

use clap::{Parser, Subcommand, ValueEnum};
use inlinescope::ground_truth::GroundTruthError;
use inlinescope::REGISTRY_VERSION;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Config(String),
    #[error("every variant failed to build")]
    AllBuildsFailed,
    #[error("{0}")]
    Format(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Config(_) => 2,
            CliError::AllBuildsFailed => 3,
            CliError::Format(_) => 4,
        }
    }
}

impl From<GroundTruthError> for CliError {
    fn from(e: GroundTruthError) -> Self {
        CliError::Format(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogLevel {
    Quiet,
    Info,
    Debug,
}

#[derive(Debug, Parser)]
#[command(name = "inlinescope", version = VERSION.as_str(), about = "Measure, explain, and amplify compiler function inlining")]
pub struct Cli {
    /// Write outputs into this directory instead of printing them.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Machine-readable summaries.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, value_enum, default_value = "quiet")]
    pub log_level: LogLevel,
    /// Feature registry to use.
    #[arg(long, global = true, default_value = REGISTRY_VERSION)]
    pub registry_version: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inlining report from a binary's DWARF.
    GroundTruth {
        #[arg(required = true)]
        binaries: Vec<PathBuf>,
        /// Also write where this binary's functions went in each variant.
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
    /// Parse a captured compiler remark stream.
    Remarks {
        stream: PathBuf,
        /// Cross-check passed remarks against this binary's DWARF.
        #[arg(long)]
        binary: Option<PathBuf>,
    },
    /// Run the cost model on one call site.
    Simulate {
        #[arg(long)]
        site: PathBuf,
        #[arg(long, conflicts_with = "profile")]
        params: Option<PathBuf>,
        /// Built-in parameter set: default or clang14.
        #[arg(long, default_value = "default")]
        profile: String,
        /// Optimization level; defaults to the case's own level, else O2.
        #[arg(long)]
        opt: Option<String>,
    },
    /// 62-slot feature vectors from a disassembly listing.
    Features { listing: PathBuf },
    /// Build a project under a grid of flag variants.
    Sweep {
        /// YAML sweep configuration.
        #[arg(required_unless_present = "list_presets")]
        config: Option<PathBuf>,
        /// Print the variant grid without building.
        #[arg(long)]
        dry_run: bool,
        /// Leave compile_seconds empty for byte-stable reports.
        #[arg(long)]
        no_timings: bool,
        /// Named flag preset appended after the base flags.
        #[arg(long)]
        preset: Option<String>,
        /// Greedy search for maximal inlining with this many builds.
        #[arg(long, value_name = "BUDGET")]
        search: Option<usize>,
        /// Concurrent builds; overrides the config.
        #[arg(long)]
        parallelism: Option<usize>,
        /// Print the built-in presets and exit.
        #[arg(long)]
        list_presets: bool,
    },
    /// Drift and CDF reports.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Debug, Subcommand)]
pub enum ReportCommand {
    /// Rank feature slots by median gap between two feature CSVs.
    Drift {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 18)]
        k: usize,
    },
    /// Inlining-ratio CDFs from sweep CSVs, one series per file.
    Cdf {
        #[arg(required = true)]
        sweeps: Vec<PathBuf>,
        #[arg(long, default_value = "Inlining ratio CDF")]
        title: String,
    },
}

static VERSION: LazyLock<String> =
    LazyLock::new(|| format!("{} registry={REGISTRY_VERSION}", env!("CARGO_PKG_VERSION")));

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.log_level {
        LogLevel::Quiet => log::LevelFilter::Error,
        LogLevel::Info => log::LevelFilter::Info,
        LogLevel::Debug => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("inlinescope: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
