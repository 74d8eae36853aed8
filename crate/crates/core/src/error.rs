use num_complex::Complex64;
use thiserror::Error;

/// Every failure mode of the evaluators, certifiers and searches.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("evaluation within pole guard at z = {0}")]
    Pole(Complex64),

    #[error("argument {0} lies on a branch cut")]
    Branch(Complex64),

    #[error("quadrature did not converge (achieved estimate {achieved:e})")]
    Accuracy { achieved: f64 },

    #[error("series division by a series with vanishing constant term")]
    Division,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("falsification: {0}")]
    Falsification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
