use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("state not normalized: sum = {sum}")]
    NotNormalized { sum: f64 },
    #[error("{what} out of range: {value}")]
    Range { what: &'static str, value: f64 },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("grid of {points} points exceeds budget of {budget}")]
    Budget { points: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
