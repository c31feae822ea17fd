//! Command-line front end for `qnull`: certificate files, loop files and the
//! four subcommands `obstruct`, `construct`, `verify` and `pushforward`.

pub mod commands;
pub mod format;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::Outcome;

/// Environment variable that overrides the default verification tolerance.
pub const TOL_ENV: &str = "QNULL_DEFAULT_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        source: format::FormatError,
    },
    #[error(transparent)]
    Core(#[from] qnull::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Default tolerance: `QNULL_DEFAULT_TOL` if set, else 1e-9.
pub fn default_tol() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::Usage(format!("{TOL_ENV}={v:?} is not a positive number"))),
        },
        Err(_) => Ok(qnull::Tolerances::default().verify),
    }
}
