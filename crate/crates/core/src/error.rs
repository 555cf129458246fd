use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(
        "{family} enumeration for n={n} exceeds the cap n<={cap} (use a cap override to force it)"
    )]
    LimitExceeded {
        family: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("polynomial is not palindromic: {0}")]
    NotPalindromic(String),
    #[error("malformed Prufer code: {0}")]
    MalformedCode(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("statistic {stat:?} is not defined for family {family:?}")]
    IncompatibleStat { family: String, stat: String },
    #[error("output error: {0}")]
    Io(String),
    #[error("unknown verification suite {0:?}")]
    InvalidSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
