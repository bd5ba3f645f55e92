use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pin pitch {0} cm outside [1.94, 2.78]")]
    BoundDomain(f64),
    #[error("unit-cube coordinate {index} = {value} outside [0, 1]")]
    Decode { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("constraint `{0}` has a zero limit")]
    ZeroLimit(String),
    #[error("invalid constraint `{name}`: {reason}")]
    InvalidConstraint { name: String, reason: String },
    #[error("missing quantity `{0}` required by a constraint")]
    MissingQuantity(String),
    #[error("geometry must be positive: {0}")]
    Domain(String),
    #[error("proxy model is not calibrated")]
    Uncalibrated,
    #[error("sample table: {0}")]
    SampleTable(String),
    #[error("economic parameters: {0}")]
    Econ(String),
    #[error("annual energy is zero")]
    ZeroEnergy,
    #[error("empty reference direction set")]
    EmptyReferenceSet,
    #[error("point {index} lies beyond the reference point")]
    BeyondReference { index: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
}
