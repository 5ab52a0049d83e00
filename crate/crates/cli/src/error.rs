use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error(transparent)]
    Model(#[from] landau_kratzer::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const EXIT_USAGE: i32 = 1;
/// At least one level failed verification.
pub const EXIT_VERIFICATION: i32 = 2;
