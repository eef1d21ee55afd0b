use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Model configuration or latent state inconsistent with the configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Survey data that violates a dataset invariant.
    #[error("invalid data: {0}")]
    Data(String),

    /// Dataset file problem tied to a specific line.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("survey design error: {0}")]
    Design(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("initialization failed: log-posterior not finite after {attempts} attempts")]
    Initialization { attempts: usize },

    #[error("enumeration cap too small: truncated posterior mass {tail_mass:e} exceeds {limit:e}")]
    CapTooSmall { tail_mass: f64, limit: f64 },

    #[error("preset `{preset}` has no embedded data: {source_note}")]
    MissingData { preset: String, source_note: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

impl Error {
    /// Process exit status: 1 usage or configuration, 2 data, 3 estimation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Domain(_)
            | Error::Data(_)
            | Error::Parse { .. }
            | Error::Design(_)
            | Error::MissingData { .. }
            | Error::Io { .. }
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::Estimation(_) | Error::Initialization { .. } | Error::CapTooSmall { .. } => 3,
        }
    }
}
