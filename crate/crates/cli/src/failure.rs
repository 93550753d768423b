//! Diagnostics with process exit codes.

use std::fmt;

use lawmine_core::{BacktestError, DataError, LearnError, MmdrError};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_LEARN: i32 = 4;
/// Output could not be written.
pub const EXIT_IO: i32 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Failure::new(EXIT_CONFIG, message)
    }

    pub fn data(message: impl Into<String>) -> Self {
        Failure::new(EXIT_DATA, message)
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<DataError> for Failure {
    fn from(e: DataError) -> Self {
        Failure::data(e.to_string())
    }
}

impl From<LearnError> for Failure {
    fn from(e: LearnError) -> Self {
        let code = match e {
            LearnError::InvalidConfig(_) => EXIT_CONFIG,
            LearnError::InvalidTask(_) => EXIT_DATA,
            _ => EXIT_LEARN,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<MmdrError> for Failure {
    fn from(e: MmdrError) -> Self {
        let code = match e {
            MmdrError::InvalidConfig(_) => EXIT_CONFIG,
            MmdrError::NotATargetForm(_) | MmdrError::Logic(_) => EXIT_DATA,
            _ => EXIT_LEARN,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<BacktestError> for Failure {
    fn from(e: BacktestError) -> Self {
        let code = match e {
            BacktestError::InvalidConfig(_) => EXIT_CONFIG,
            BacktestError::InsufficientData(_) | BacktestError::Alignment(_) => EXIT_DATA,
            _ => EXIT_LEARN,
        };
        Failure::new(code, e.to_string())
    }
}
