use std::fmt;

pub const CONFIG: u8 = 2;
pub const PARSE: u8 = 3;
pub const COMPUTATION: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Parse(String),
    Computation(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => CONFIG,
            CliError::Parse(_) => PARSE,
            CliError::Computation(_) => COMPUTATION,
        }
    }

    /// Prefixes the message with the input it came from.
    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Config(m) => CliError::Config(format!("{what}: {m}")),
            CliError::Parse(m) => CliError::Parse(format!("{what}: {m}")),
            CliError::Computation(m) => CliError::Computation(format!("{what}: {m}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Parse(m) | CliError::Computation(m) => f.write_str(m),
        }
    }
}

impl From<dstau::Error> for CliError {
    fn from(e: dstau::Error) -> Self {
        match e {
            dstau::Error::Parse { .. } => CliError::Parse(e.to_string()),
            dstau::Error::Invalid(_) => CliError::Config(e.to_string()),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
