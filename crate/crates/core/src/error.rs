use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum AviError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("empty point set")]
    EmptyPointSet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A command-line flag combination that cannot work.
    #[error("usage: {0}")]
    Usage(String),

    #[error("handle out of range: degree {degree}, column {column}")]
    HandleOutOfRange { degree: usize, column: usize },

    #[error("expansion would need {projected} terms, above the cap of {cap}")]
    ExpansionTooLarge { projected: u128, cap: u128 },

    #[error("polynomial degree {degree} exceeds bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("model format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl AviError {
    /// Attach the offending path to an I/O error.
    pub fn file(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> AviError + '_ {
        move |source| AviError::File {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, AviError>;
