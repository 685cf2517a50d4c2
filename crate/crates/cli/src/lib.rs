//! Command-line companion to `borel-core`: JSON file formats, reports and
//! the `calc` job runner.

pub mod format;
pub mod report;
mod run;

pub use run::{run, Command, JobConfig, Outcome, OutputFormat, REPRESENT_FUNCTIONS, SAMPLED_FUNCTIONS};

use borel_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Math(#[from] Error),
}

impl CliError {
    /// Short name of the failure, e.g. `NotCommuting` or `InputError`.
    pub fn kind(&self) -> String {
        match self {
            CliError::Io(_) => "IoError".into(),
            CliError::Input(_) => "InputError".into(),
            CliError::Math(Error::Parse(_)) => "ParseError".into(),
            CliError::Math(e) => format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect(),
        }
    }

    /// 2 for unusable input, 1 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Input(_) => 2,
            CliError::Math(e) => match e {
                Error::Parse(_)
                | Error::Arity { .. }
                | Error::CoordinateOutOfRange { .. }
                | Error::DimensionMismatch { .. }
                | Error::LengthMismatch { .. }
                | Error::NonFinite { .. }
                | Error::Invalid(_) => 2,
                _ => 1,
            },
        }
    }
}

impl From<borel_core::funcexpr::ParseError> for CliError {
    fn from(e: borel_core::funcexpr::ParseError) -> Self {
        CliError::Math(Error::Parse(e))
    }
}
