use thiserror::Error;

/// Errors produced by the arrowhead library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),

    #[error("level must be at least 1, got {0}")]
    Level(usize),

    #[error("vertex index {index} out of range for dimension {dimension}")]
    VertexIndex { index: usize, dimension: usize },

    #[error("digit {digit} at position {position} out of range for dimension {dimension}")]
    Digit {
        digit: usize,
        position: usize,
        dimension: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate {value} at index {index}")]
    NonFinite { index: usize, value: String },

    #[error("tolerance must be positive and finite")]
    Tolerance,

    #[error("point matches vertices {first} and {second} of the same simplex within tolerance")]
    AmbiguousVertex { first: usize, second: usize },

    #[error("invalid reproduction rule: {0}")]
    Rule(RuleViolation),

    #[error("malformed rule text at line {line}: {message}")]
    RuleSyntax { line: usize, message: String },

    #[error("malformed address {text:?}: {message}")]
    AddressSyntax { text: String, message: String },

    #[error("malformed block: {0}")]
    Block(String),

    #[error("{requested} cells requested, cap is {cap}")]
    CapExceeded { requested: u128, cap: u128 },

    #[error("invalid projection: {0}")]
    Projection(String),

    #[error("invalid style: {0}")]
    Style(String),

    #[error(
        "level {level}: {stitches} stitches not divisible by {entries} sequence entries"
    )]
    Divisibility {
        level: usize,
        stitches: usize,
        entries: usize,
    },

    #[error("invalid input: {0}")]
    Input(String),
}

/// Which structural constraint of a reproduction rule is broken.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleViolation {
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },

    #[error("row {row}: expected {expected} entries, found {found}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}: index {value} out of range 0..={max}")]
    OutOfRange { row: usize, value: usize, max: usize },

    #[error("row {row}: index {value} repeated")]
    Repeated { row: usize, value: usize },

    #[error("row {row}: must begin with {expected}, found {found}")]
    First {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}: must end with {expected}, found {found}")]
    Last {
        row: usize,
        expected: usize,
        found: usize,
    },
}

impl From<RuleViolation> for Error {
    fn from(v: RuleViolation) -> Self {
        Error::Rule(v)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
