//! Command-line front end for the `qser` congruence verifier.

pub mod cache;
mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use commands::Outcome;
use output::Format;

/// Largest truncation accepted without `--allow-large`.
pub const CEILING_LIMIT: u64 = 8_000_000;

#[derive(Debug, Parser)]
#[command(name = "qser", version, about = "Verify congruences and q-series identities for overpartitions with l-regular non-overlined parts")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format for reports and coefficient dumps.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Directory for cached coefficient tables (no caching when unset).
    #[arg(long, env = "QSER_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Refuse any single expansion longer than this many coefficients.
    #[arg(long, default_value_t = CEILING_LIMIT, global = true)]
    pub ceiling: u64,
    /// Permit a ceiling above 8000000.
    #[arg(long, global = true)]
    pub allow_large: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the claims of one theorem (or `all`) against the series engine.
    Verify(VerifyArgs),
    /// Verify the identity catalog.
    Identities(IdentitiesArgs),
    /// Compare brute-force enumeration, the DP counter and the series engine.
    OracleCompare(OracleArgs),
    /// Search for progressions A n + B whose coefficients all vanish mod M.
    Scan(ScanArgs),
    /// Print the coefficients of an expression such as "f2*f3/f1^2".
    Dump(DumpArgs),
    /// Inspect or empty the coefficient cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Theorem id, or `all` for every theorem's default instances.
    pub id: String,
    /// Check n = 0..=NMAX (default depends on the progression length).
    #[arg(long)]
    pub nmax: Option<u64>,
    /// Replace every claim's modulus (the result is reported as a conjecture).
    #[arg(long = "mod")]
    pub modulus: Option<u64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub ell: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Primes for the multi-prime family, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<i64>,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub k_max: Option<u32>,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    /// Truncation for exact entries; congruent entries run to twice this.
    #[arg(long, default_value_t = 2000)]
    pub trunc: usize,
    /// Only these entries (ids or aliases).
    #[arg(long = "id")]
    pub ids: Vec<String>,
    /// Add a deliberately wrong entry (for testing the failure path).
    #[arg(long, hide = true)]
    pub negative_control: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long, default_value_t = 25)]
    pub n_enum: u64,
    #[arg(long, default_value_t = 500)]
    pub n_dp: usize,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub amax: u64,
    /// Moduli to test, comma separated.
    #[arg(long = "mod", value_delimiter = ',', required = true)]
    pub moduli: Vec<u64>,
    #[arg(long, default_value_t = 200)]
    pub nmax: u64,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    pub expr: String,
    #[arg(long, default_value_t = 20)]
    pub trunc: usize,
    #[arg(long = "mod")]
    pub modulus: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    Info,
    Clear,
}

/// Parse `args` and run; usage errors exit with status 2.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    commands::dispatch(cli).into()
}
