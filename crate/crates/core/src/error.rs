use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree overflow: need {needed}, have {available}")]
    DegreeOverflow { needed: usize, available: usize },
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("division by zero")]
    DivisionByZero,
    #[error("partition size {0} exceeds enumeration bound {1}")]
    BoundExceeded(usize, usize),
    #[error("not a member of {0}")]
    NotMember(String),
    #[error("{0} is not a refinement of {1}")]
    NotRefinement(String, String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("alphabets overlap on `{0}`")]
    OverlappingAlphabets(String),
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("matrix is not symmetric")]
    Asymmetric,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
