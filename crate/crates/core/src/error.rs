//! Error type shared across the workspace.
//!
//! Two failure classes matter to callers: `Domain` means the inputs are
//! outside what the mathematics supports (wrong discriminant congruence,
//! even conductor prime, and so on), `Data` means an external table could
//! not be read or failed verification. Internal invariant violations, such
//! as a class number formula coming out non-integral, are bugs and panic
//! instead of surfacing here.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

// Display carries the bare message so the CLI can prefix a uniform
// "error: " without double-labeling; the class only decides the exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Domain(String),

    #[error("{0}")]
    Data(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::Data(_) | Error::Io { .. } => 3,
        }
    }
}
