use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} out of range: {value} (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("{kind} at position {position}: {message}")]
    Parse {
        kind: ParseErrorKind,
        position: usize,
        message: String,
    },

    #[error("inconsistent results: {0}")]
    Inconsistent(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownVariable,
    BadExponent,
    BadLiteral,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownVariable => "unknown variable",
            ParseErrorKind::BadExponent => "invalid exponent",
            ParseErrorKind::BadLiteral => "invalid literal",
        };
        f.write_str(s)
    }
}

impl Error {
    /// Byte offset into the parsed text for parse errors.
    pub fn position(&self) -> Option<usize> {
        match self {
            Error::Parse { position, .. } => Some(*position),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
