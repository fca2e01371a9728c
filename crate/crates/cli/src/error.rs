use std::fmt;

use irrhodge_core::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Core(Error),
    Parse(String),
    Cycle(String),
    Io(String),
    Usage(String),
    /// A verification suite found a mismatch.
    Mismatch(String),
    /// Context added while resolving a file.
    Within(String, Box<CliError>),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Parse(_) => "E_PARSE",
            CliError::Cycle(_) => "E_CYCLE",
            CliError::Io(_) => "E_IO",
            CliError::Usage(_) => "E_USAGE",
            CliError::Mismatch(_) => "E_MISMATCH",
            CliError::Within(_, e) => e.name(),
        }
    }

    /// 0 ok, 1 input errors, 2 irregular, 3 irrational exponent, 4 failed
    /// verification or any other pipeline error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Irregular { .. }) => 2,
            CliError::Core(Error::IrrationalExponent { .. }) => 3,
            CliError::Core(Error::Shape(_) | Error::BadAlpha(_) | Error::BadFiltration(_) | Error::NotUnit) => 1,
            CliError::Parse(_) | CliError::Cycle(_) | CliError::Io(_) | CliError::Usage(_) => 1,
            CliError::Core(_) | CliError::Mismatch(_) => 4,
            CliError::Within(_, e) => e.exit_code(),
        }
    }

    pub fn within(self, file: &str) -> CliError {
        match self {
            e @ (CliError::Within(..) | CliError::Io(_) | CliError::Cycle(_)) => e,
            CliError::Parse(msg) if msg.starts_with(file) => CliError::Parse(msg),
            e => CliError::Within(file.to_string(), Box::new(e)),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Parse(m) => write!(f, "E_PARSE: {m}"),
            CliError::Cycle(m) => write!(f, "E_CYCLE: file references form a cycle {m}"),
            CliError::Io(m) => write!(f, "E_IO: {m}"),
            CliError::Usage(m) => write!(f, "E_USAGE: {m}"),
            CliError::Mismatch(m) => write!(f, "E_MISMATCH: {m}"),
            CliError::Within(file, e) => write!(f, "{e} (in {file})"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
