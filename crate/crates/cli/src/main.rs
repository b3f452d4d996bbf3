//! Command-line driver: resolves the field, owns the worker pool, dispatches
//! subcommands, and writes deterministic JSON or CSV reports.
//!
//! Exit codes: 0 when every check passed, 1 when a check found violations
//! (the report is still written), 2 on usage or configuration errors.

mod runners;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pptri_core::FieldCtx;

#[derive(Parser)]
#[command(
    name = "pptri",
    version,
    about = "Permutation trinomials a x + b x^q + x^(2q-1) over F_(q^2): \
             classification predicates and their verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the classification predicates against brute force over (a, b) pairs
    Verify(VerifyArgs),
    /// Classify a single (a, b) pair
    Classify(ClassifyArgs),
    /// Check every binomial-sum identity at every admissible z
    Identities(IdentitiesArgs),
    /// Check the power-sum expansion and the two closed forms
    Powersums(PowersumsArgs),
    /// Cross-check the Hermite criterion against brute force (q <= 8)
    Hermite(HermiteArgs),
    /// Check the cubic discriminant identities and root uniqueness
    Cubic(CubicArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Prime power q; the field is F_{q^2}
    #[arg(long, conflicts_with_all = ["p", "n"])]
    q: Option<u32>,
    /// Characteristic p, used together with --n
    #[arg(long, requires = "n")]
    p: Option<u32>,
    /// Extension degree n over F_p, used together with --p
    #[arg(long, requires = "p")]
    n: Option<u32>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; csv is available for verify only
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Check a pseudorandom sample of pairs instead of the full square
    #[arg(long)]
    samples: Option<u64>,
    /// Worker threads; 0 picks the machine default
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Encoding of the coefficient a
    #[arg(long)]
    a: u32,
    /// Encoding of the coefficient b
    #[arg(long)]
    b: u32,
}

#[derive(Args)]
struct IdentitiesArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PowersumsArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Random (a, b, alpha) triples for the expansion check when q > 5
    #[arg(long, default_value_t = 1000)]
    samples: u64,
}

#[derive(Args)]
struct HermiteArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CubicArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Encoding of a; with --b, restricts the run to one instance
    #[arg(long, requires = "b")]
    a: Option<u32>,
    /// Encoding of b; with --a, restricts the run to one instance
    #[arg(long, requires = "a")]
    b: Option<u32>,
    /// Encoding of a target value w; reports the cubic attached to (a, b, w)
    #[arg(long, requires = "b")]
    w: Option<u32>,
    /// Worker threads; 0 picks the machine default
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Debug)]
enum CliError {
    Core(pptri_core::Error),
    Io(std::io::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<pptri_core::Error> for CliError {
    fn from(e: pptri_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn build_ctx(f: &FieldArgs) -> Result<FieldCtx, CliError> {
    match (f.q, f.p, f.n) {
        (Some(q), None, None) => Ok(FieldCtx::from_q(q)?),
        (None, Some(p), Some(n)) => Ok(FieldCtx::new(p, n)?),
        _ => Err(CliError::Usage(
            "specify the field with either --q or both --p and --n".into(),
        )),
    }
}

fn configure_pool(workers: usize) -> Result<(), CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Usage(format!("could not configure the worker pool: {e}")))
}

fn require_json(output: &OutputArgs) -> Result<(), CliError> {
    if output.format == Format::Csv {
        return Err(CliError::Usage(
            "csv output is only available for the verify subcommand".into(),
        ));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify(args) => {
            let ctx = build_ctx(&args.field)?;
            configure_pool(args.workers)?;
            let report = runners::verify(&ctx, args.samples)?;
            let ok = report.mismatches.is_empty();
            let content = match args.output.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report)?;
                    s.push('\n');
                    s
                }
                Format::Csv => runners::verify_csv(&report),
            };
            emit(&args.output.out, &content)?;
            Ok(ok)
        }
        Command::Classify(args) => {
            require_json(&args.output)?;
            let ctx = build_ctx(&args.field)?;
            let value = runners::classify(&ctx, args.a, args.b)?;
            emit_json(&args.output.out, &value)?;
            Ok(true)
        }
        Command::Identities(args) => {
            require_json(&args.output)?;
            let ctx = build_ctx(&args.field)?;
            let (value, ok) = runners::identities(&ctx)?;
            emit_json(&args.output.out, &value)?;
            Ok(ok)
        }
        Command::Powersums(args) => {
            require_json(&args.output)?;
            let ctx = build_ctx(&args.field)?;
            let (value, ok) = runners::powersums(&ctx, args.samples)?;
            emit_json(&args.output.out, &value)?;
            Ok(ok)
        }
        Command::Hermite(args) => {
            require_json(&args.output)?;
            let ctx = build_ctx(&args.field)?;
            let (value, ok) = runners::hermite(&ctx)?;
            emit_json(&args.output.out, &value)?;
            Ok(ok)
        }
        Command::Cubic(args) => {
            require_json(&args.output)?;
            let ctx = build_ctx(&args.field)?;
            configure_pool(args.workers)?;
            let (value, ok) = match (args.a, args.b, args.w) {
                (None, None, None) => runners::cubic_full(&ctx)?,
                (Some(a), Some(b), None) => runners::cubic_instance(&ctx, a, b)?,
                (Some(a), Some(b), Some(w)) => runners::cubic_target(&ctx, a, b, w)?,
                _ => unreachable!("clap enforces the flag pairing"),
            };
            emit_json(&args.output.out, &value)?;
            Ok(ok)
        }
    }
}

fn emit_json(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(out, &s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
