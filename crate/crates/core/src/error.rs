use thiserror::Error;

/// Failure modes shared by every module. The variant decides the CLI exit
/// code; `module` names where the violated contract lives.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{module}: invalid input: {msg}")]
    Validation { module: &'static str, msg: String },

    #[error("{module}: precondition violated: {msg}")]
    Precondition { module: &'static str, msg: String },

    #[error("{module}: insufficient resolution: {msg}")]
    Resolution { module: &'static str, msg: String },

    #[error("{module}: ill-conditioned: {msg}")]
    IllConditioned { module: &'static str, msg: String },

    #[error("{module}: numerical contract failed: {msg}")]
    Contract { module: &'static str, msg: String },
}

impl Error {
    pub fn validation(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Validation { module, msg: msg.into() }
    }

    pub fn precondition(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Precondition { module, msg: msg.into() }
    }

    pub fn resolution(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Resolution { module, msg: msg.into() }
    }

    pub fn ill_conditioned(module: &'static str, msg: impl Into<String>) -> Self {
        Error::IllConditioned { module, msg: msg.into() }
    }

    pub fn contract(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Contract { module, msg: msg.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Precondition { .. } => 1,
            Error::Resolution { .. } | Error::IllConditioned { .. } => 2,
            Error::Contract { .. } => 3,
        }
    }

    pub fn module(&self) -> &'static str {
        match self {
            Error::Validation { module, .. }
            | Error::Precondition { module, .. }
            | Error::Resolution { module, .. }
            | Error::IllConditioned { module, .. }
            | Error::Contract { module, .. } => module,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
