use std::path::PathBuf;

use clap::ValueEnum;
use poncelet_core::Tolerance;

use crate::CliError;

pub const TOL_ENV: &str = "PONCELET_TOL";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tol: Tolerance,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Overrides as given on the command line; `None` means "not given".
#[derive(Clone, Copy, Debug, Default)]
pub struct ToleranceFlags {
    pub abs_eps: Option<f64>,
    pub rel_eps: Option<f64>,
    pub cluster_eps: Option<f64>,
}

impl RunConfig {
    /// Precedence for rel_eps: flag, then `PONCELET_TOL`, then the default.
    pub fn resolve(
        flags: ToleranceFlags,
        env_tol: Option<&str>,
        seed: Option<u64>,
        output: Option<PathBuf>,
        format: Format,
    ) -> Result<Self, CliError> {
        let base = Tolerance::default();
        let env_rel = match env_tol {
            Some(s) => Some(parse_positive(TOL_ENV, s)?),
            None => None,
        };
        for (name, v) in [
            ("--abs-eps", flags.abs_eps),
            ("--rel-eps", flags.rel_eps),
            ("--cluster-eps", flags.cluster_eps),
        ] {
            if let Some(v) = v {
                check_positive(name, v)?;
            }
        }
        let tol = Tolerance::new(
            flags.abs_eps.unwrap_or(base.abs_eps),
            flags.rel_eps.or(env_rel).unwrap_or(base.rel_eps),
            flags.cluster_eps.unwrap_or(base.cluster_eps),
        )
        .map_err(|e| CliError::Input(e.to_string()))?;
        Ok(RunConfig {
            tol,
            seed: seed.unwrap_or(DEFAULT_SEED),
            output,
            format,
        })
    }
}

fn parse_positive(name: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("{name}: cannot parse {s:?} as a number")))?;
    check_positive(name, v)?;
    Ok(v)
}

fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}
