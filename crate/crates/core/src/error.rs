use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed number: {0:?}")]
    MalformedNumber(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a dyadic rational: {0}")]
    NotDyadic(String),
    #[error("invalid marked set: {0}")]
    InvalidMarkedSet(String),
    #[error("not a standard dyadic partition: {0}")]
    NotStandard(String),
    #[error("partition pair has mismatched cardinalities ({domain} vs {range})")]
    CardinalityMismatch { domain: usize, range: usize },
    #[error("invalid element of F: {0}")]
    InvalidElement(String),
    #[error("domain partition of the element is not contained in the target partition")]
    DomainNotContained,
    #[error("partition has {0} points; f_T needs at least 3")]
    TooFewPoints(usize),
    #[error("empty family")]
    EmptyFamily,
    #[error("family mesh {mesh} exceeds the bound {bound}")]
    MeshTooLarge { mesh: String, bound: String },
    #[error("tower height {0} exceeds the supported maximum of 6")]
    TowerTooTall(u32),
    #[error("radius {radius} exceeds the configured limit {limit}")]
    RadiusTooLarge { radius: u32, limit: u32 },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid interval chain: {0}")]
    InvalidChain(String),
    #[error("invalid constant: {0}")]
    InvalidConstant(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
