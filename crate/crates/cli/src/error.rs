use std::fmt;
use std::process::ExitCode;

use minpose::io::ParseError;
use minpose::PoseError;

/// Failure of a command, mapped onto the process exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(ParseError),
    Pose(PoseError),
    NoSolution,
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Pose(e) if e.is_degenerate() => 3,
            CliError::Pose(PoseError::NoModel) | CliError::NoSolution => 4,
            CliError::Pose(PoseError::InsufficientData(_) | PoseError::ContractViolation(_)) => 2,
            CliError::Pose(_) => 1,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(e) => e.fmt(f),
            CliError::Pose(e) => e.fmt(f),
            CliError::NoSolution => f.write_str("no solution"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<PoseError> for CliError {
    fn from(e: PoseError) -> Self {
        CliError::Pose(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
