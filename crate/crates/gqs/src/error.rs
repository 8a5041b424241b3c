use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GqsError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("superbracket needs homogeneous arguments")]
    NonHomogeneous,
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("node {0} is not an isotropic odd simple root")]
    NotIsotropicOdd(usize),
    #[error("unknown case: {0}")]
    UnknownCase(String),
    #[error("case selector is ambiguous or empty: {0}")]
    Selector(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GqsError>;
