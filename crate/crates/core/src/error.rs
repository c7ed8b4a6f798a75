use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the simulator.
///
/// Variants group into the three failure classes the command-line tool maps
/// to exit codes: configuration, data and computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: timestamps not strictly increasing at line {line} ({timestamp})")]
    Ordering {
        path: PathBuf,
        line: u64,
        timestamp: String,
    },

    #[error("{0}: no data rows")]
    EmptyInput(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("data error: {0}")]
    Data(String),

    #[error("schema error: missing column `{0}`")]
    MissingColumn(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("levelized cost undefined: {0}")]
    Undefined(String),

    #[error("criterion `{0}` is constant; entropy weight is undefined")]
    DegenerateEntropy(String),

    #[error("criterion `{0}` has zero norm; vector normalization is undefined")]
    Normalization(String),

    #[error("invalid decision matrix: {0}")]
    Matrix(String),

    #[error("no hydrogen price in [{lower}, {upper}] EUR/kg produces any hydrogen")]
    NoFeasiblePrice { lower: f64, upper: f64 },

    #[error("experiment {label}: {source}")]
    Cell {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Failure class, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Computation,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) => ErrorClass::Config,
            Error::Parse { .. }
            | Error::Ordering { .. }
            | Error::EmptyInput(_)
            | Error::Io { .. }
            | Error::Data(_)
            | Error::MissingColumn(_)
            | Error::Csv(_)
            | Error::Json(_) => ErrorClass::Data,
            Error::Cell { source, .. } => source.class(),
            _ => ErrorClass::Computation,
        }
    }

    /// Process exit code: 1 config, 2 data, 3 computation.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Config => 1,
            ErrorClass::Data => 2,
            ErrorClass::Computation => 3,
        }
    }
}
