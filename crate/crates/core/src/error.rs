use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent sequence must start with 0, got {0}")]
    NonZeroStart(f64),
    #[error("exponent {index} is not finite or negative ({value})")]
    InvalidExponent { index: usize, value: f64 },
    #[error("exponents must increase strictly: r[{index}] = {next} does not exceed r[{prev_index}] = {prev}", prev_index = index - 1)]
    MonotonicityViolation { index: usize, prev: f64, next: f64 },
    #[error("exponent gap {gap:e} at index {index} is below the minimum separation {min:e}")]
    NodeCollision { index: usize, gap: f64, min: f64 },
    #[error("cannot extend to {requested} exponents: no generator and only {available} stored")]
    NoGenerator { requested: usize, available: usize },
    #[error("explicit generator exhausted: {requested} exponents requested, {available} available")]
    GeneratorExhausted { requested: usize, available: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("difference order {order} out of range for a sequence with last index {last}")]
    OrderOutOfRange { order: usize, last: usize },
    #[error("index {index} out of range (maximum {max})")]
    IndexOutOfRange { index: i64, max: i64 },
    #[error("parameter {0} lies outside [0, 1]")]
    DomainError(f64),
    #[error("empty node list")]
    EmptyNodes,
    #[error("gap product not applicable: factor {factor} at index {index} is not positive")]
    NotApplicable { index: usize, factor: f64 },
    #[error("exponent sequence has {available} entries but index {required} is needed")]
    SequenceTooShort { required: usize, available: usize },
    #[error("corner-cutting weight {weight} at index {index} is outside (0, 1)")]
    WeightOutOfRange { index: usize, weight: f64 },
    #[error("{points} control points do not match {exponents} exponents")]
    LengthMismatch { points: usize, exponents: usize },
    #[error("control polygon needs at least one point of dimension >= 1")]
    EmptyPolygon,
    #[error("coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },
    #[error("curve exponents are not a prefix of the extended sequence (first mismatch at index {index})")]
    PrefixMismatch { index: usize },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
