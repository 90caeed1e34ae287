//! The `zonal` command line.
//!
//! Exit codes: 0 on success, 1 when a verification or tolerance check fails,
//! 2 on bad usage (unknown flags, malformed or inconsistent parameters).

mod estimate;
mod table;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::value::RawValue;

pub use table::{TableDoc, TableRowDoc};

/// Highest degree `table` and `verify` accept.
pub const MAX_DEGREE: usize = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "zonal",
    version,
    about = "Zonal polynomial tables, checks and orthogonal-group moments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every zonal polynomial of one degree.
    Table(TableArgs),
    /// Run the table checks over a range of degrees.
    Verify(VerifyArgs),
    /// Exact moment next to a Monte Carlo estimate.
    Estimate(EstimateArgs),
    /// Draw Haar orthogonal matrices.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Monomial,
    #[value(alias = "power-sum")]
    Powersum,
}

impl From<BasisArg> for crate::Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Monomial => crate::Basis::Monomial,
            BasisArg::Powersum => crate::Basis::PowerSum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Angles,
    GramSchmidt,
}

impl From<SamplerArg> for crate::haar::SamplerKind {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Angles => crate::haar::SamplerKind::Angles,
            SamplerArg::GramSchmidt => crate::haar::SamplerKind::GramSchmidt,
        }
    }
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    f: usize,
    #[arg(long, value_enum, default_value = "powersum")]
    basis: BasisArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// A degree or an inclusive range such as `1..6`.
    #[arg(long)]
    f: String,
    /// Check a table saved by `table --format json` instead of recomputing.
    #[arg(long)]
    table: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EstimateKind {
    TracePower,
    ZonalSplit,
    #[value(name = "trace-AH", alias = "trace-ah")]
    TraceAh,
    ExpSeries,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(value_enum)]
    kind: EstimateKind,
    /// Degree of the moment.
    #[arg(long, default_value_t = 1)]
    f: usize,
    /// Dimension; checked against the eigenvalue lists when given.
    #[arg(long)]
    n: Option<usize>,
    /// Eigenvalues `1,2,3/2`; for trace-AH a full matrix `1,2;3,4`.
    #[arg(long = "A", allow_hyphen_values = true)]
    a: String,
    #[arg(long = "B", allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker cap; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
    #[arg(long, value_enum, default_value = "angles")]
    sampler: SamplerArg,
    /// Fail (exit 1) when |z| exceeds this.
    #[arg(long)]
    max_z: Option<f64>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "angles")]
    sampler: SamplerArg,
}

/// A command failure with its exit code.
#[derive(Debug)]
pub(crate) struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAILED,
            message: format!("i/o error: {e}"),
        }
    }
}

pub(crate) type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Table(a) => table::cmd_table(a.f, a.basis.into(), a.format, out),
        Command::Verify(a) => verify::cmd_verify(&a.f, a.table.as_deref(), out),
        Command::Estimate(a) => estimate::cmd_estimate(&a, out),
        Command::Sample(a) => estimate::cmd_sample(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// 17 significant digits; non-finite values become `null`.
pub(crate) fn float(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted floats are valid JSON")
}

pub(crate) fn opt_float(x: Option<f64>) -> Box<RawValue> {
    float(x.unwrap_or(f64::NAN))
}
