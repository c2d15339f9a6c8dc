use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors from file formats, statistics and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: header declares {declared}, file lists {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("line {line}: `{field}` is not a number")]
    NotNumeric { line: usize, field: String },
    #[error("no depot given")]
    MissingDepot,
    #[error("missing header field {0}")]
    MissingField(&'static str),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("reference cost must be positive, got {0}")]
    NonPositiveReference(f64),
    #[error("empty sample")]
    EmptySample,
    #[error("{0}")]
    Config(String),
    #[error("annotation: {0}")]
    Annotation(String),
    #[error(transparent)]
    Model(#[from] carptdsc_core::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    TomlWrite(#[from] toml::ser::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
