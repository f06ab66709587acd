//! The `maass` command-line tool.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

pub mod cache;
mod commands;
pub mod config;
pub mod output;

pub use commands::{check_domain, parse_complex, parse_rep, parse_window};

/// Usage errors exit with 2, failed computations and verifications with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<maass_core::Error> for CliError {
    fn from(e: maass_core::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "maass", version, about = "Maass forms, period functions and transfer operators for SL2(Z)")]
pub struct Cli {
    /// File of `key = value` lines supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Locate zeros of det(I - L_s) on the critical line.
    Scan {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        k: f64,
        /// `trivial` or `A,M` for rho_{A,M}.
        #[arg(long, default_value = "trivial")]
        rep: String,
        /// Range `t0:t1` of Im s.
        #[arg(long)]
        window: String,
        /// Number of scan intervals; defaults to a spacing of 0.2.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 32)]
        degree: usize,
        #[arg(long, default_value = "zeros.json")]
        out: PathBuf,
    },
    /// Solve for a weight-0 Maass cusp form and store it in the cache.
    SolveMaass {
        /// Range `r0:r1` of the spectral parameter.
        #[arg(long)]
        window: String,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long, default_value = ".maass-cache")]
        cache_dir: PathBuf,
        /// Also write a summary with the form id.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Period function of a cached (or freshly solved) Maass form.
    Period {
        /// Form id printed by `solve-maass`.
        #[arg(long, conflicts_with_all = ["window", "parity"])]
        from_cache: Option<String>,
        #[arg(long, requires = "parity")]
        window: Option<String>,
        #[arg(long, value_enum, requires = "window")]
        parity: Option<ParityArg>,
        #[arg(long, default_value = ".maass-cache")]
        cache_dir: PathBuf,
        #[arg(long, default_value = "period.csv")]
        out: PathBuf,
        #[arg(long, default_value = "certificate.json")]
        certificate: PathBuf,
    },
    /// Run a verification suite and write a report.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Check the theta transformation laws for the given indices.
    ThetaCheck {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        m: Vec<u32>,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Theta-decompose a Jacobi form given by a bundle or built from a cached odd form.
    JacobiDecompose {
        /// Bundle whose coefficient table is looked up in the cache.
        #[arg(long, conflicts_with = "from_form")]
        bundle: Option<PathBuf>,
        /// Build index-6 data from this cached odd weight-0 form.
        #[arg(long)]
        from_form: Option<String>,
        /// Where to write the bundle built with `--from-form`.
        #[arg(long, default_value = "bundle.json")]
        bundle_out: PathBuf,
        #[arg(long, default_value = "0.21,0.93", allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value = ".maass-cache")]
        cache_dir: PathBuf,
        #[arg(long, default_value = "decomposition.json")]
        out: PathBuf,
    },
}

/// Run the tool on `args` (including the program name) and return the exit status.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let args = match config::merge(args.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Failure(m) => eprintln!("failed: {m}"),
            }
            e.exit_code()
        }
    }
}
