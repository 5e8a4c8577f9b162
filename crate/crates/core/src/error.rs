use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (CSV rows, config files).
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    /// Input that parsed but violates a table or config invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// Arguments outside the domain of a formula or operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A symbol that the coder has no code or model entry for.
    #[error("coding error: unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("decode error at bit {offset}: {message}")]
    Decode { offset: u64, message: String },

    /// Coded data whose length or header does not match the code.
    #[error("framing error: {0}")]
    Framing(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Io,
    Decode,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(_) => ErrorKind::Io,
            Error::Decode { .. } | Error::Framing(_) => ErrorKind::Decode,
            Error::Stage { source, .. } => source.kind(),
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::Domain(_)
            | Error::UnknownSymbol(_)
            | Error::Json(_) => ErrorKind::Validation,
        }
    }

    pub(crate) fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        match err.into_kind() {
            csv::ErrorKind::Io(e) => Error::Io(e),
            kind => Error::Parse {
                line,
                message: format!("{kind:?}"),
            },
        }
    }
}
