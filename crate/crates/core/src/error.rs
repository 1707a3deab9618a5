use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate wire label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown wire label `{0}`")]
    UnknownLabel(String),
    #[error("dimension mismatch on `{name}`: {left} vs {right}")]
    DimensionMismatch { name: String, left: usize, right: usize },
    #[error("operator too large: {wires} wires exceed the dense cap of {cap}")]
    TooLarge { wires: usize, cap: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("expected a word of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid process function: {0}")]
    InvalidProcessFunction(String),
    #[error("party {0} has a global past (its input never depends on other parties)")]
    HasGlobalPast(usize),
    #[error("too many parties: {got} (supported up to {max})")]
    TooManyParties { got: usize, max: usize },
    #[error("party {0} does not satisfy the transparent control condition")]
    NotTransparent(usize),
    #[error("party index {index} out of range for {n} parties")]
    PartyOutOfRange { index: usize, n: usize },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("wire mismatch: {0}")]
    WireMismatch(String),
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
