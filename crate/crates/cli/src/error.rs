use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Failure of a command, carrying its process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Core(#[from] layers_core::Error),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 usage or size cap, 3 unreadable input, 4 internal inconsistency,
    /// 1 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        use layers_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Inconsistent(_) => 4,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::SizeLimit { .. } | E::Domain(_) => 2,
                E::Parse { .. } | E::DimensionMismatch { .. } => 3,
                E::Inconsistency(_) => 4,
            },
        }
    }
}
