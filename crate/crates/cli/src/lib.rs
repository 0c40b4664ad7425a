//! Command-line front-end for `clover-core`.
//!
//! Every subcommand builds a payload, renders it in the requested format and
//! reports whether the quantities it computed met the tolerance. The binary
//! maps that to the exit status:
//!
//! * `0`: everything met its tolerance,
//! * `1`: a tolerance or a verification row failed (the payload is still printed),
//! * `2`: bad usage,
//! * `3`: a computation or I/O error.

// `!(a <= b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
mod output;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use clover_core::CloverIndex;

pub use output::Format;

/// Default for `--tol`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "clover", version, about = "Clover constants, clover curves and generalized Wallis products")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    pub format: FormatArg,
    /// Tolerance each computed quantity must meet.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Reserved. Nothing in this tool is random, so the flag is rejected.
    #[arg(long, global = true)]
    pub seedless: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Human,
    Json,
    Csv,
    /// Only valid for `clover --render`.
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The clover constant ϖ_m by quadrature, product or Beta function.
    Varpi(commands::VarpiArgs),
    /// Partial products of the generalized Wallis product.
    Product(commands::ProductArgs),
    /// Evaluate the clover function or render the curve.
    Clover(commands::CloverArgs),
    /// Moments I_m(n) by every available route.
    Moments(commands::MomentsArgs),
    /// Check every identity over ranges of m and n.
    Verify(verify::VerifyArgs),
    /// Convergence table of the partial products.
    Report(commands::ReportArgs),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{method}: {source}")]
    Method {
        method: &'static str,
        source: clover_core::Error,
    },
    #[error(transparent)]
    Core(#[from] clover_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 3,
        }
    }
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    /// The rendered payload, newline-terminated.
    pub body: String,
    /// Whether every computed quantity met its tolerance.
    pub passed: bool,
    /// Why not, when `passed` is false.
    pub failure: Option<String>,
    /// Write `body` here instead of standard output.
    pub out: Option<PathBuf>,
}

impl Outcome {
    fn new(body: String, failure: Option<String>) -> Self {
        Self {
            body,
            passed: failure.is_none(),
            failure,
            out: None,
        }
    }

    /// Writes the payload to its destination.
    pub fn emit(&self) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, &self.body).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            }),
            None => {
                print!("{}", self.body);
                Ok(())
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.seedless {
        return Err(CliError::Usage(
            "--seedless is reserved: every command is deterministic and uses no random numbers".into(),
        ));
    }
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be a positive number, got {}", cli.tol)));
    }
    let svg_allowed = matches!(&cli.command, Command::Clover(a) if a.render);
    let format = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Svg if svg_allowed => Format::Svg,
        FormatArg::Svg => return Err(CliError::Usage("--format svg is only valid with `clover --render`".into())),
    };
    match &cli.command {
        Command::Varpi(a) => commands::varpi(a, cli.tol, format),
        Command::Product(a) => commands::product(a, format),
        Command::Clover(a) => commands::clover(a, cli.tol, format),
        Command::Moments(a) => commands::moments(a, cli.tol, format),
        Command::Verify(a) => verify::run(a, cli.tol, format),
        Command::Report(a) => commands::report(a, format),
    }
}

pub(crate) fn parse_index(s: &str) -> Result<CloverIndex, String> {
    let m: u32 = s.parse().map_err(|e| format!("{e}"))?;
    CloverIndex::new(m).map_err(|e| e.to_string())
}
