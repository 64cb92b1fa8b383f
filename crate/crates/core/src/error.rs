use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Parameters outside configured ceilings, unknown names, degenerate input.
    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("decode error: {0}")]
    Decode(String),

    /// A transformation was required to be information lossless and is not.
    #[error("machine is not information lossless (witness {0} / {1})")]
    NotLossless(String, String),
}

impl Error {
    /// Domain failures, as opposed to usage or configuration mistakes.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Decode(_) | Error::NotLossless(..))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
