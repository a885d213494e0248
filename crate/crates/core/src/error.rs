use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    #[error("component mismatch: {0}")]
    ComponentMismatch(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("not a hyperelliptic connected component: {0}")]
    NotHyperellipticComponent(String),

    #[error("gap set for the {component} component in genus {genus} is only known for 2 <= g <= 5 (pass --assume-generic to use the generic gaps)")]
    UnprovenRange { genus: u32, component: String },

    #[error("invalid gap set: {0}")]
    InvalidGapSet(String),

    #[error("invalid rank table: {0}")]
    InvalidRankTable(String),

    #[error("filtration degrees are not decreasing at level {level}")]
    NotDecreasing { level: usize },

    #[error("recursion level {level} is empty")]
    EmptyLevel { level: usize },

    #[error("no filtration is known for {0} (not covered)")]
    NotCovered(String),

    #[error("genus {0} is too small (need g >= 2)")]
    GenusTooSmall(u32),

    #[error("enumeration too large: {0} compositions exceeds the guard")]
    TooLarge(u128),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}
