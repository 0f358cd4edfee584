use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("product space needs at least one coordinate")]
    EmptySpace,
    #[error("coordinate {coord}: alphabet must have at least two symbols")]
    AlphabetTooSmall { coord: usize },
    #[error("coordinate {coord}: weight {weight} is not strictly between 0 and 1")]
    NonPositiveWeight { coord: usize, weight: String },
    #[error("coordinate {coord}: weights sum to {sum}, expected 1")]
    WeightsNotNormalized { coord: usize, sum: String },
    #[error("symbol {symbol} out of range for coordinate {coord} (alphabet size {size})")]
    SymbolOutOfRange { coord: usize, symbol: usize, size: usize },
    #[error("coordinate {coord} out of range for a space of dimension {n}")]
    CoordinateOutOfRange { coord: usize, n: usize },
    #[error("enumeration of {outcomes} outcomes exceeds the cap of {cap}")]
    EnumerationCapExceeded { outcomes: u128, cap: u64 },
    #[error("table has {got} entries, expected {expected}")]
    TableLengthMismatch { got: usize, expected: usize },
    #[error("value {value} at index {index} is not Boolean")]
    NonBooleanValue { index: usize, value: String },
    #[error("unknown builtin function `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operation requires binary alphabets (coordinate {coord} has {size} symbols)")]
    AlphabetNotBinary { coord: usize, size: usize },
    #[error("partial point support does not match: {0}")]
    SupportMismatch(String),
    #[error("function is not increasing")]
    NotIncreasing,
    #[error("function is not measurable with respect to the collection's sigma-algebra")]
    NotMeasurable,
    #[error("monotonicity violated: {0}")]
    MonotonicityViolated(String),
    #[error("no atom qualifies: {0}")]
    NoQualifyingAtom(String),
    #[error("schedule infeasible: {0}")]
    ScheduleInfeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
