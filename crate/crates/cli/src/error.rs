use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] essmod::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
