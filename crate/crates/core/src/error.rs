use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A fee schedule document failed validation. Every violation is listed.
    #[error("invalid fee schedule: {}", .0.join("; "))]
    Schedule(Vec<String>),

    /// A configuration is inconsistent (empty box, zero fee at a decision age, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// The data cannot identify the model.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// The renewal model produced an impossible quantity, e.g. an inverted
    /// truncation interval under non-monotone thresholds.
    #[error("model validity error: {0}")]
    ModelValidity(String),

    #[error("sampling error: interval [{lower}, {upper}] has zero probability mass at sigma = {sigma}")]
    Sampling { lower: f64, upper: f64, sigma: f64 },

    #[error("ensemble error: {skipped} of {total} parameter vectors skipped")]
    Ensemble { skipped: usize, total: usize },

    /// File-level ingestion failure (missing column, unreadable header).
    #[error("ingest error: {0}")]
    Ingest(String),

    #[error("reporting error: {0}")]
    Report(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status: 2 for bad input or configuration, 3 when a
    /// computation on valid input fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ModelValidity(_) | Error::Sampling { .. } | Error::Ensemble { .. } | Error::Report(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
