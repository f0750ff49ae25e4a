use std::path::PathBuf;
use std::process::ExitCode;

use ainf_cli::report::{Format, Report};
use ainf_cli::run::{run, Command, Flags, Mode, DEFAULT_SAMPLES, DEFAULT_SEED};
use anyhow::Context;
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

/// Exact verifier for curved cyclic A∞-structures over a truncated Novikov ring and for
/// calibrated linear algebra in dimension 4.
///
/// Exit codes: 0 PASS, 1 FAIL, 2 input error, 3 search exhausted.
#[derive(Debug, Parser)]
#[command(name = "ainf", version)]
struct Cli {
    command: Command,
    /// JSON input file.
    spec: PathBuf,
    /// Highest arity to check (default: the file's arity cutoff; 6 for lemma-check).
    #[arg(long)]
    arity: Option<usize>,
    /// Energy cutoff to check at, at most the file's cutoff.
    #[arg(long)]
    energy: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Solver for mc-solve.
    #[arg(long, value_enum, default_value = "newton")]
    mode: Mode,
    /// Comma-separated energy grid for the ansatz solver.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    #[arg(long, default_value_t = 10_000)]
    max_nodes: usize,
    /// Pairing dimension for complete.
    #[arg(long, default_value_t = 4)]
    n: i64,
    /// Energy weight of the formal coordinates in symbolic points.
    #[arg(long, default_value = "1/2")]
    weight: String,
    /// Only check this random sample.
    #[arg(long)]
    instance: Option<usize>,
    /// Only report this comma-separated input tuple.
    #[arg(long)]
    tuple: Option<String>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let flags = Flags {
        arity: cli.arity,
        energy: cli.energy.clone(),
        seed: cli.seed,
        samples: cli.samples,
        format,
        mode: cli.mode,
        grid: cli.grid.clone(),
        max_iterations: cli.max_iterations,
        max_nodes: cli.max_nodes,
        n: cli.n,
        weight: cli.weight.clone(),
        instance: cli.instance,
        tuple: cli.tuple.clone(),
        timing: cli.timing,
    };
    let path = cli.spec.display().to_string();
    let report = match std::fs::read_to_string(&cli.spec).with_context(|| format!("reading {path}")) {
        Ok(text) => run(cli.command, &path, &text, &flags),
        Err(e) => Report::error(cli.command.name(), &format!("{e:#}")),
    };
    print!("{}", report.render(format));
    ExitCode::from(report.verdict.exit_code() as u8)
}
