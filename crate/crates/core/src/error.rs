//! Error taxonomy shared by every module.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Typed failure classes.
///
/// The split mirrors how callers must react: [`Error::Input`] means the data
/// cannot support the requested analysis (too short, non-finite, mismatched
/// schemes), [`Error::Config`] means a parameter is outside its legal range,
/// and [`Error::Degenerate`] means the statistics collapsed to zero (for
/// example a constant series) so a studentized statistic is undefined.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
}
