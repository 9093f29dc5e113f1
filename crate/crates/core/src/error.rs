use thiserror::Error;

/// Errors raised by instance construction, evaluation and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("size error: {what} needs {needed} states but the cap is {cap}")]
    Size { what: String, needed: u128, cap: u128 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("mode error: {0}")]
    Mode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Input(_) => "input",
            Error::Size { .. } => "size",
            Error::Precondition(_) => "precondition",
            Error::Mode(_) => "mode",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn size(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::Size {
            what: what.into(),
            needed,
            cap,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Fails with a size error when `needed` exceeds `cap`.
pub(crate) fn ensure_within(what: &str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::size(what, needed, cap))
    } else {
        Ok(())
    }
}
