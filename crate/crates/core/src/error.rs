use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("variable x{index} exceeds declared arity {arity}")]
    Arity { index: usize, arity: usize },
    #[error("no branch guard holds at {point:?}")]
    Domain { point: Vec<f64> },
    #[error("evaluation error at {point:?}: {message}")]
    Eval { point: Vec<f64>, message: String },
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point {point:?} is too close to the projection pole")]
    Pole { point: Vec<f64> },
    #[error("domain is empty")]
    EmptyDomain,
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("point {point:?} is isolated in the sampled domain")]
    Isolated { point: Vec<f64> },
    #[error("point {point:?} is not in the domain of the multifunction")]
    NotInDomain { point: Vec<f64> },
    #[error("point {point:?} does not belong to the closed set sample")]
    NotInSet { point: Vec<f64> },
    #[error("no minimum selector found down to epsilon {epsilon}")]
    NoSelector { epsilon: f64 },
    #[error("input/output error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Format(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
