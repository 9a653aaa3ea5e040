use std::fmt;

use collision_core::Error;

/// Failure of a CLI run, carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameter files or overrides.
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Core(e) => match e {
                Error::Parse { .. } | Error::InvalidArgument(_) | Error::FellerViolation { .. } | Error::Io(_) => 2,
                Error::Structure(_) | Error::Domain(_) => 3,
                Error::NonConvergence { .. } | Error::Constraint(_) | Error::AllCellsFailed(_) => 4,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(msg) => f.write_str(msg),
            Self::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Core(Error::Io(e))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
