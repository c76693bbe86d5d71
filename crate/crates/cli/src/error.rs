use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("key error: {0}")]
    Key(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Core(#[from] qmedshield::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        use qmedshield::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Key(_) => 4,
            CliError::Format(_) => 5,
            CliError::Core(e) => match e {
                E::EmptyRange | E::InvalidParameter { .. } => 2,
                E::KeyParse { .. }
                | E::KeyRange { .. }
                | E::Divergence { .. }
                | E::ImaginaryDrift { .. }
                | E::InvalidPermutation(_)
                | E::InvalidRule(_) => 4,
                _ => 5,
            },
        }
    }
}
