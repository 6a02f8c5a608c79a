//! Command-line front end for `poncelet-core`.
//!
//! Every subcommand writes one JSON document (or CSV table) to stdout or
//! `--output`. Exit codes: 0 success, 1 negative verdict under `--strict`,
//! 2 input error, 3 numerical failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use poncelet_core::Error;

pub mod commands;
pub mod config;
pub mod grid;
pub mod io;
pub mod report;
pub mod selftest;

pub use config::{Format, RunConfig, ToleranceFlags};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence
            | Error::DegreeError
            | Error::SamplingExhausted(_)
            | Error::ResultantIllConditioned(_)
            | Error::BranchCollapse
            | Error::NumericalTangency => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "poncelet", version, about = "Poncelet pairs of complex conics")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Relative tolerance; overrides PONCELET_TOL.
    #[arg(long, global = true)]
    pub rel_eps: Option<f64>,
    #[arg(long, global = true)]
    pub abs_eps: Option<f64>,
    /// Distance below which roots and points are identified.
    #[arg(long, global = true)]
    pub cluster_eps: Option<f64>,
    /// Write here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cayley condition, transversality and j-invariant of a pair.
    Check {
        pair: PathBuf,
        /// Polygon order.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Exit with status 1 when the condition fails.
        #[arg(long)]
        strict: bool,
    },
    /// Simultaneous diagonalization and moduli point of a pair.
    Normalize { pair: PathBuf },
    /// j-invariant of a pair, or of diag(λ₁, λ₂, λ₃) against the identity.
    Jinv {
        #[arg(required_unless_present = "lambda")]
        pair: Option<PathBuf>,
        /// Three entries, each RE or RE,IM.
        #[arg(
            long,
            num_args = 3,
            conflicts_with = "pair",
            allow_hyphen_values = true
        )]
        lambda: Option<Vec<String>>,
    },
    /// Points of the Cayley moduli curve over one j-value.
    ///
    /// CSV columns: z_re, z_im, root, lambda1_re, lambda1_im, lambda2_re,
    /// lambda2_im, lambda3_re, lambda3_im, mult, res7, res8, orbits, total.
    Fiber {
        /// RE,IM
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Fibers over a grid of j-values, in grid order.
    ///
    /// Grids: circle:CRE,CIM,R,N or rect:RE0,RE1,NRE,IM0,IM1,NIM.
    /// CSV columns as for `fiber`, one row per root.
    Atlas {
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
    /// Random pairs (C, D) satisfying the triangle condition for a fixed D.
    Sample {
        /// Conic file, or a pair file whose D is used.
        #[arg(long)]
        d: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Poncelet trajectories from seeded starting points.
    ///
    /// CSV columns: seed, closure_error, closed, max_residual.
    Trace {
        pair: PathBuf,
        /// Seed of the first trajectory; trajectory k uses START_SEED + k.
        #[arg(long, default_value_t = 0)]
        start_seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
    /// Analytic eigenvalue gradients against central differences.
    ///
    /// Without a pair, COUNT random transverse pairs are drawn from --seed.
    /// CSV columns: pair, root_re, root_im, rel_error, worst_entry, pass.
    Gradcheck {
        pair: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1e-6)]
        bound: f64,
    },
    /// Runs the property suite. CSV columns: name, pass, value, bound.
    Selftest,
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let env_tol = std::env::var(config::TOL_ENV).ok();
    let result = RunConfig::resolve(
        ToleranceFlags {
            abs_eps: cli.abs_eps,
            rel_eps: cli.rel_eps,
            cluster_eps: cli.cluster_eps,
        },
        env_tol.as_deref(),
        cli.seed,
        cli.output.clone(),
        cli.format,
    )
    .and_then(|cfg| commands::execute(&cli.command, &cfg));
    match result {
        Ok(outcome) => {
            if let Err(e) = io::emit(&outcome.text, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
