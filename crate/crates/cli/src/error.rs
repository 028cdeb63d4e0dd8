use std::path::PathBuf;

use hcs_core::Error as CoreError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARAM: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_HERALD: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Param(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    /// Some outputs were written, but at least one part failed numerically.
    #[error("{0}")]
    Partial(String),
}

impl CliError {
    pub fn param(msg: impl Into<String>) -> Self {
        CliError::Param(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Param(_) | CliError::Io { .. } => EXIT_PARAM,
            CliError::Core(e) => core_exit_code(e),
            CliError::Partial(_) => EXIT_NUMERICAL,
        }
    }
}

pub fn core_exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::InvalidParameter(_) | CoreError::BothZero => EXIT_PARAM,
        CoreError::HeraldFailed { .. } => EXIT_HERALD,
        _ => EXIT_NUMERICAL,
    }
}

pub type CliResult<T> = Result<T, CliError>;
