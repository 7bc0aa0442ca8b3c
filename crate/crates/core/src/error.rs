use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("monomial {monomial} is not valid in {model}")]
    InvalidMonomial { monomial: String, model: String },

    #[error("operation `{op}` is not defined on {model}")]
    Unsupported { op: &'static str, model: String },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },

    #[error("vector length {got} does not match ambient dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("unknown filter tag `{0}`")]
    UnknownFilter(String),

    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("fact file line {line}: {message}")]
    FactFile { line: usize, message: String },

    #[error("unknown citation id `{0}`")]
    UnknownCitation(String),

    #[error("contradictory facts `{first}` and `{second}` both match {tuple}")]
    ContradictoryFacts { first: String, second: String, tuple: String },

    #[error(
        "inconsistent rules for Σ^{k} D({m},{n}): non-triviality [{}] vs triviality [{}]",
        not_trivial.join(", "),
        trivial.join(", ")
    )]
    Inconsistent { k: u32, m: u32, n: u32, not_trivial: Vec<String>, trivial: Vec<String> },

    #[error("i/o: {0}")]
    Io(String),
}

/// A syntax error with the character offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
