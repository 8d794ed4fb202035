//! Command-line front end for `su11`.
//!
//! ```text
//! su11 state  --family pcs --k 0.5 --alpha 0.5 --dim 64 --format csv
//! su11 matel  --k 1 --r 0.5 --theta 0 --cap 8
//! su11 stats  --family nbs --M 2 --alpha 0.5
//! su11 verify --only gdo
//! ```
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or domain error.

use std::fmt;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

pub mod family;
pub mod output;
pub mod verify;

/// Environment variable that replaces the built-in default truncation.
pub const DIM_ENV: &str = "SU11_DEFAULT_DIM";
pub const DEFAULT_DIM: usize = 256;
pub const MIN_DIM: usize = 8;
pub const MAX_DIM: usize = 8192;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<su11::Error> for CliError {
    fn from(e: su11::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "su11",
    version,
    about = "su(1,1) coherent, squeezed and related states in a truncated basis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coefficients of one state.
    State(StateArgs),
    /// Print displacement-operator matrix elements.
    Matel(MatelArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
    /// Print photon-number statistics of one state.
    Stats(StateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pcs,
    Bgcs,
    Nlcs,
    Dns,
    Lps,
    Nbs,
    Sv,
    Sf,
    Tmsv,
    Pair,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Pcs => "pcs",
            Family::Bgcs => "bgcs",
            Family::Nlcs => "nlcs",
            Family::Dns => "dns",
            Family::Lps => "lps",
            Family::Nbs => "nbs",
            Family::Sv => "sv",
            Family::Sf => "sf",
            Family::Tmsv => "tmsv",
            Family::Pair => "pair",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

fn parse_dim(s: &str) -> Result<usize, String> {
    let d: usize = s
        .parse()
        .map_err(|_| format!("dim must be an integer, got {s:?}"))?;
    if !(MIN_DIM..=MAX_DIM).contains(&d) {
        return Err(format!("dim must lie in [{MIN_DIM}, {MAX_DIM}], got {d}"));
    }
    Ok(d)
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("not a number: {t:?}"))
    };
    let z = match s.split_once(',') {
        Some((re, im)) => Complex64::new(parse(re)?, parse(im)?),
        None => Complex64::new(parse(s)?, 0.0),
    };
    if !z.is_finite() {
        return Err(format!("complex value must be finite, got {s:?}"));
    }
    Ok(z)
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Bargmann index; fixed by the family for nbs, sv, sf, tmsv and pair.
    #[arg(long)]
    pub k: Option<f64>,
    /// Eigenvalue parameter as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<Complex64>,
    /// Squeezing magnitude.
    #[arg(long)]
    pub r: Option<f64>,
    /// Squeezing phase.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Number state displaced by dns.
    #[arg(long)]
    pub m: Option<usize>,
    /// nbs: real M = 2k; lps: Laguerre order.
    #[arg(long = "M")]
    pub big_m: Option<f64>,
    /// nlcs preset: pcs-like, bgcs-like or rational:a,b for G(n) = (n+a)/(n+b).
    #[arg(long)]
    pub g: Option<String>,
    /// Pair index of the two-mode families.
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long, value_enum, allow_hyphen_values = true)]
    pub sign: Option<Sign>,
    #[arg(long, env = DIM_ENV, default_value_t = DEFAULT_DIM, value_parser = parse_dim)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Column eigenvectors, accurate for all indices.
    Table,
    /// Folded finite sum.
    Sum,
    /// Terminating Gauss series.
    Hyp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Table => "table",
            Method::Sum => "sum",
            Method::Hyp => "hyp",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MatelArgs {
    #[arg(long, default_value_t = 0.5)]
    pub k: f64,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, env = DIM_ENV, default_value_t = DEFAULT_DIM, value_parser = parse_dim)]
    pub dim: usize,
    /// Rows and columns printed: n, m < min(dim, cap).
    #[arg(long, default_value_t = 16)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Method::Table)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, env = DIM_ENV, default_value_t = DEFAULT_DIM, value_parser = parse_dim)]
    pub dim: usize,
    /// Replace the squeezing grid with a single r.
    #[arg(long)]
    pub r: Option<f64>,
    /// Run one group only.
    #[arg(long, value_enum)]
    pub only: Option<verify::Group>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub report: Option<std::path::PathBuf>,
}

/// Runs one command, writing its output to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut impl Write) -> CliResult<i32> {
    match cli.command {
        Command::State(args) => {
            let built = family::build(&args)?;
            out.write_all(output::state(&args, &built).as_bytes())?;
            Ok(0)
        }
        Command::Stats(args) => {
            let built = family::build(&args)?;
            out.write_all(output::stats(&args, &built).as_bytes())?;
            Ok(0)
        }
        Command::Matel(args) => {
            let text = output::matel(&args)?;
            out.write_all(text.as_bytes())?;
            Ok(0)
        }
        Command::Verify(args) => {
            let cfg = verify::Config::from_args(&args)?;
            let report = verify::run(&cfg);
            let json = report.to_json(&cfg);
            if let Some(path) = &args.report {
                std::fs::write(path, &json)?;
            }
            if args.json {
                out.write_all(json.as_bytes())?;
            } else {
                out.write_all(report.to_table().as_bytes())?;
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}
