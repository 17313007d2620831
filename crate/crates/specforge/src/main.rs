//! Command-line driver: run one experiment, write report.csv / report.json,
//! and exit 0 (all assertions pass), 1 (assertion failure), 2 (bad
//! configuration) or 3 (numerical failure).

use clap::{Parser, Subcommand};
use specforge::harness::{
    init_parallelism, run, ExperimentConfig, ExperimentKind, OutputFormat,
};
use std::path::PathBuf;
use std::process::ExitCode;

const DEFAULT_VERIFY: &str = include_str!("../configs/verify.json");
const DEFAULT_SPECTRUM: &str = include_str!("../configs/spectrum.json");
const DEFAULT_SWEEP: &str = include_str!("../configs/sweep.json");
const DEFAULT_BGK: &str = include_str!("../configs/bgk.json");
const DEFAULT_SYMBOL: &str = include_str!("../configs/symbol.json");

#[derive(Parser)]
#[command(
    name = "specforge",
    about = "Numerical laboratory for eigenvalue bounds of non-selfadjoint operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct RunArgs {
    /// JSON experiment configuration; bundled defaults are used if absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for report files; falls back to the config's
    /// output path, then to ./out.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json | both
    #[arg(long, default_value = "both")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Full explicit-constant verification suite.
    Verify(RunArgs),
    /// Discrete spectrum and eigenvalue functionals of one model.
    Spectrum(RunArgs),
    /// Seeded sweep over abstract models.
    Sweep(RunArgs),
    /// Zero sums and growth envelopes on disk oracles.
    Bgk(RunArgs),
    /// Resolvent-symbol integrals and quotient bounds.
    Symbol(RunArgs),
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Self::Verify(_) => ExperimentKind::VerifyLemmas,
            Self::Spectrum(_) => ExperimentKind::Spectrum,
            Self::Sweep(_) => ExperimentKind::Sweep,
            Self::Bgk(_) => ExperimentKind::Bgk,
            Self::Symbol(_) => ExperimentKind::Symbol,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Self::Verify(a) | Self::Spectrum(a) | Self::Sweep(a) | Self::Bgk(a)
            | Self::Symbol(a) => a,
        }
    }

    fn default_config(&self) -> &'static str {
        match self {
            Self::Verify(_) => DEFAULT_VERIFY,
            Self::Spectrum(_) => DEFAULT_SPECTRUM,
            Self::Sweep(_) => DEFAULT_SWEEP,
            Self::Bgk(_) => DEFAULT_BGK,
            Self::Symbol(_) => DEFAULT_SYMBOL,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_parallelism();
    let kind = cli.command.kind();
    let args = cli.command.args();

    let mut config = match &args.config {
        Some(path) => match ExperimentConfig::from_file(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("configuration error: {e}");
                return ExitCode::from(2);
            }
        },
        None => ExperimentConfig::from_json(cli.command.default_config())
            .expect("bundled default config is valid"),
    };
    if config.experiment != kind {
        eprintln!(
            "configuration error: config kind '{}' does not match subcommand '{}'",
            config.experiment.name(),
            kind.name()
        );
        return ExitCode::from(2);
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let format: OutputFormat = match args.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    };

    let out_dir = args
        .out
        .clone()
        .or_else(|| config.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let report = run(&config);
    print!("{}", report.summary());
    if let Err(e) = report.write(&out_dir, format) {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(3);
    }
    println!(
        "report written to {} (seed {}, digest {})",
        out_dir.display(),
        report.seed,
        report.config_digest
    );

    if report.has_assertion_failure() {
        ExitCode::from(1)
    } else if report.has_numerical_failure() {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
