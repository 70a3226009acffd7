use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration value violates its contract.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// A scenario document names a path that is missing or malformed.
    #[error("config `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("sample time {t} is not after the previous sample at {prev}")]
    NonMonotoneTime { t: f64, prev: f64 },

    #[error("numeric fault at t = {t}: {detail}")]
    NumericFault { t: f64, detail: String },

    #[error("AUV model left its valid envelope at t = {t} (|theta| = {theta} rad)")]
    ModelValidity { t: f64, theta: f64 },

    #[error("response is not integrating: {0}")]
    NotIntegrating(String),

    #[error("degenerate metrics: {0}")]
    DegenerateMetrics(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line tool.
    ///
    /// Validation problems map to 2, numeric faults to 3, anything else to 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid { .. }
            | Error::Config { .. }
            | Error::NonMonotoneTime { .. }
            | Error::NotIntegrating(_)
            | Error::DegenerateMetrics(_) => 2,
            Error::NumericFault { .. } | Error::ModelValidity { .. } => 3,
            Error::Io { .. } | Error::Csv(_) | Error::Json(_) => 1,
        }
    }
}
