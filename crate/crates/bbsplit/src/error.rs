use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: malformed scenario file: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("malformed scenario document: {0}")]
    Document(#[from] serde_json::Error),
    #[error("unknown {what} kind {value:?}")]
    UnknownKind { what: &'static str, value: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] bbsplit_core::Error),
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 for bad flags or parameters, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) | Error::Model(bbsplit_core::Error::InvalidParameter(_)) => 2,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
