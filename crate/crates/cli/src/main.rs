//! `unitfrac`: greedy and weak greedy unit-fraction expansions from the
//! command line.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 for usage or input errors.

mod commands;
mod input;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

/// Term cap used when `UNITFRAC_MAX_TERMS` is unset.
pub const DEFAULT_MAX_TERMS: usize = unitfrac::greedy::DEFAULT_MAX_TERMS;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn check(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<unitfrac::Error> for CliError {
    fn from(e: unitfrac::Error) -> Self {
        match e {
            unitfrac::Error::DepthExhausted(_) => CliError::check(e.to_string()),
            other => CliError::usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "unitfrac",
    version,
    about = "Exact greedy and weak greedy Egyptian-fraction tools"
)]
struct Cli {
    /// Output format; defaults to csv for `unique --range`, json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for anything randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand theta with the greedy or a weak greedy algorithm.
    Expand(ExpandArgs),
    /// Replay a denominator file against theta and/or check jump brackets.
    Verify(VerifyArgs),
    /// Build theta and denominators realizing a target shadow sequence.
    Construct(ConstructArgs),
    /// Uniqueness verdicts for shadow pairs or a whole sequence.
    Unique(UniqueArgs),
    /// Terms, bracket checks and certified sums for a closed-form family.
    Family(FamilyArgs),
    /// Growth classification, ratio bounds, or the bounded-shadow bound.
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// b = a at every step.
    Greedy,
    /// b = ceil(t a) at every step.
    Gt,
    /// Full control through --lambda and --select.
    Wgaa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Select {
    Greedy,
    #[value(name = "ceil-t-a")]
    CeilTA,
    MinAdmissible,
    Explicit,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// Target in (0, 1], as P/Q.
    #[arg(long)]
    pub theta: String,
    #[arg(long, value_enum, default_value = "greedy")]
    pub algo: Algo,
    #[arg(long, default_value = "1")]
    pub t: String,
    /// all | set:1,3 | complement:2 | periodic:P:r1,r2
    #[arg(long, default_value = "all")]
    pub lambda: String,
    #[arg(long, value_enum, default_value = "ceil-t-a")]
    pub select: Select,
    /// Denominators for --select explicit, comma separated.
    #[arg(long)]
    pub b_list: Option<String>,
    #[arg(long)]
    pub terms: usize,
    /// Choose the final term greedily.
    #[arg(long)]
    pub last_greedy: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Denominators, one per line.
    #[arg(long)]
    pub b_file: PathBuf,
    /// Replay against this theta.
    #[arg(long)]
    pub theta: Option<String>,
    /// Shadows a_1..a_{N+1}; checks each b_n against its jump bracket.
    #[arg(long)]
    pub a_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Target shadow prefix, one per line.
    #[arg(long, conflicts_with_all = ["family", "random"])]
    pub a_file: Option<PathBuf>,
    /// Continuation past the file: `repeat` or a family spec.
    #[arg(long, default_value = "repeat")]
    pub continuation: String,
    /// Use a family as the target.
    #[arg(long, conflicts_with = "random")]
    pub family: Option<String>,
    /// Use a seeded random target with plateaus and jumps.
    #[arg(long)]
    pub random: bool,
    /// Number of jumps to construct.
    #[arg(long, default_value_t = 25)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct UniqueArgs {
    /// Sweep every pair 2 <= a_n < a_next <= RANGE.
    #[arg(long, conflicts_with = "a_file")]
    pub range: Option<u64>,
    /// Check a whole sequence.
    #[arg(long)]
    pub a_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// geometric:a=2,r=3 | arithmetic:a=3,d=2 | fibonacci | explicit:2,5,11
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value_t = 20)]
    pub terms: usize,
    /// Also report a certified enclosure of the full sum.
    #[arg(long)]
    pub theta_enclosure: bool,
    /// Terms summed exactly before the tail bracket; defaults to --terms.
    #[arg(long)]
    pub enclosure_depth: Option<usize>,
    /// Digits in decimal renderings.
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassifyMode {
    Growth,
    Ratio,
    Shadow,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_enum, default_value = "growth")]
    pub mode: ClassifyMode,
    #[arg(long)]
    pub a_file: Option<PathBuf>,
    #[arg(long)]
    pub b_file: Option<PathBuf>,
    /// Family input for growth mode.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    /// Comma-separated t values for growth mode.
    #[arg(long)]
    pub t_grid: Option<String>,
    /// theta for ratio and shadow modes.
    #[arg(long)]
    pub theta: Option<String>,
    /// t for ratio mode (1 means plain greedy).
    #[arg(long, default_value = "2")]
    pub t: String,
    /// Upper bound on the sum beyond the file, for shadow mode.
    #[arg(long)]
    pub tail_upper: Option<String>,
}

fn max_terms() -> Result<usize, CliError> {
    match std::env::var("UNITFRAC_MAX_TERMS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("UNITFRAC_MAX_TERMS={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_MAX_TERMS),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cap = max_terms()?;
    let (report, default_format) = match &cli.command {
        Command::Expand(a) => (commands::expand(a, cap)?, Format::Json),
        Command::Verify(a) => (commands::verify(a)?, Format::Json),
        Command::Construct(a) => (commands::construct(a, cli.seed)?, Format::Json),
        Command::Unique(a) => {
            let fmt = if a.range.is_some() {
                Format::Csv
            } else {
                Format::Json
            };
            (commands::unique(a)?, fmt)
        }
        Command::Family(a) => (commands::family(a, cap)?, Format::Json),
        Command::Classify(a) => (commands::classify(a, cap)?, Format::Json),
    };
    let text = report.render(cli.format.unwrap_or(default_format));
    match &cli.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a diagnostic
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("unitfrac: check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("unitfrac: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
