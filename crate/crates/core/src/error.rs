use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("jets disagree on variable count ({0} vs {1})")]
    VariableMismatch(usize, usize),

    #[error("{0} jet variables exceeds the supported maximum")]
    TooManyVariables(usize),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: String, found: String },

    #[error("division by a jet whose value is zero")]
    SingularPoint,

    #[error("value {0} lies on the branch cut (-inf, 0]")]
    BranchCut(Complex64),

    #[error("invalid group spec {0:?}")]
    InvalidGroup(String),

    #[error("row {row} is not defined for {group}")]
    InvalidRow { group: String, row: String },

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("iterated order {order} exceeds ceiling {ceiling}")]
    UnsupportedOrder { order: usize, ceiling: usize },

    #[error("no solution branch applies: {0}")]
    UnsupportedCase(String),

    #[error("inadmissible constants: {0}")]
    InadmissibleConstants(String),

    #[error("series order {order} too small, need at least {needed}")]
    InsufficientOrder { order: usize, needed: usize },

    #[error("only {accepted} of {requested} sample points landed in the domain")]
    InconclusiveDomain { accepted: usize, requested: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Errors raised while evaluating a field at a point outside its domain.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::BranchCut(_) | Error::SingularPoint)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
