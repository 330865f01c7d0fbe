use std::fmt;

/// Command-line failures, partitioned by exit code: usage errors exit 1,
/// numerical degeneracy surfaced as an error exits 2, I/O failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Numerical(msg) => write!(f, "numerical degeneracy: {msg}"),
            CliError::Io(msg) => write!(f, "i/o failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<koopman_core::Error> for CliError {
    fn from(e: koopman_core::Error) -> Self {
        match e {
            koopman_core::Error::DegenerateBasis | koopman_core::Error::FactorizationFailed => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
