use std::fmt;

/// A failure that ends the process with a specific exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input; exit code 2.
    Input(String),
    /// The numerics failed on valid input; exit code 3.
    Numerical(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<eggfit::Error> for CliError {
    fn from(e: eggfit::Error) -> Self {
        use eggfit::Error::*;
        match e {
            Domain { .. } | InvalidSpec(_) | InvalidParams(_) | Config(_) | Data { .. } | Histogram(_) => {
                CliError::Input(e.to_string())
            }
            Convergence { .. } | Degenerate(_) | UndefinedScore(_) | MStep(_) | FitFailure(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
