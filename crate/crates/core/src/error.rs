use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field size {0}; expected one of 2, 3, 4, 5, 7, 8, 9")]
    UnsupportedField(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0})")]
    FieldMismatch(String),
    #[error("shift constant must be a nonzero field element")]
    InvalidShiftConstant,
    #[error("polynomial does not divide x^m - a")]
    NotADivisor,
    #[error("generator polynomial is not monic")]
    NotMonic,
    #[error("twistulant block needs at least one row")]
    EmptyBlock,
    #[error("codes do not share the same (field, m, a)")]
    MixedInput,
    #[error("instance exceeds oracle scale: {0}")]
    OracleScaleExceeded(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("assembled rank {actual} differs from expected dimension {expected}")]
    DimensionDefect { expected: usize, actual: usize },
    #[error("index {ell} does not divide length {n}")]
    InvalidIndex { n: usize, ell: usize },
    #[error("minimum distance of the zero code is undefined")]
    ZeroCode,
    #[error("word is not a codeword")]
    NotACodeword,
    #[error("parse error at position {position}: {message}")]
    ParseError { position: usize, message: String },
    #[error("format error: {0}")]
    FormatError(String),
    #[error("target table error: {0}")]
    TargetTableError(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::FormatError(e.to_string())
    }
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::ParseError {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::PreconditionFailed(message.into())
    }
}
