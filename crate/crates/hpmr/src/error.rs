use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit statuses of the command line.
pub mod exit {
    pub const OK: u8 = 0;
    /// `evaluate`: the design violates a constraint. `optimize`: no feasible
    /// design was found.
    pub const INFEASIBLE: u8 = 1;
    /// Bad configuration or unreadable input file.
    pub const CONFIG: u8 = 2;
    /// A design or model could not be evaluated.
    pub const EVALUATION: u8 = 3;
    /// Some agents failed or the wall-clock budget ran out.
    pub const PARTIAL: u8 = 4;
    /// Every agent failed.
    pub const FAILED: u8 = 5;
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] hpmr_core::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        use hpmr_core::Error as C;
        match self {
            Error::Config(_) | Error::Io { .. } | Error::Parse { .. } => exit::CONFIG,
            Error::Core(
                C::Config(_) | C::InvalidConstraint { .. } | C::ZeroLimit(_) | C::SampleTable(_) | C::Econ(_),
            ) => exit::CONFIG,
            Error::Core(_) => exit::EVALUATION,
        }
    }
}
