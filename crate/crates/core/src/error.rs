use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument {arg} outside domain ({constraint})")]
    Domain {
        function: &'static str,
        arg: f64,
        constraint: &'static str,
    },

    #[error("{function}: pole at {arg}")]
    Pole { function: &'static str, arg: f64 },

    #[error("{function}: result overflows f64 at argument {arg}")]
    Overflow { function: &'static str, arg: f64 },

    #[error("{function}: series did not converge after {terms} terms (last relative term {last_ratio:e})")]
    NonConvergence {
        function: &'static str,
        terms: usize,
        last_ratio: f64,
    },

    #[error("{operation} requires {expected} turbulence but rytov variance is {rytov}")]
    Regime {
        operation: &'static str,
        expected: &'static str,
        rytov: f64,
    },

    #[error("numerical failure in {context}: {detail}")]
    Numeric {
        context: &'static str,
        detail: String,
    },

    #[error("invalid parameter `{key}`: {reason}")]
    Invalid { key: String, reason: String },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
