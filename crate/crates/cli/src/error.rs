use std::fmt;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
/// Bad configuration, bad input, I/O failure or a failed verification.
pub const EXIT_FAILURE: i32 = 1;
/// Parameters outside what the theory covers.
pub const EXIT_UNSUPPORTED: i32 = 2;
/// The run blew up (or its step size collapsed).
pub const EXIT_BLOWUP: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Malformed configuration or input; the message carries the location.
    Config(String),
    /// Scope boundary of the theory.
    Unsupported(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Config(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }

    pub fn at_line(line: usize, msg: impl fmt::Display) -> Self {
        CliError::Config(format!("line {line}: {msg}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<epd_core::Error> for CliError {
    fn from(e: epd_core::Error) -> Self {
        match e {
            epd_core::Error::Unsupported(m) => CliError::Unsupported(m),
            epd_core::Error::Inadmissible(_) => CliError::Unsupported(e.to_string()),
            epd_core::Error::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("json: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
