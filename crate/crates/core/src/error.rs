use thiserror::Error;

/// Errors produced by series construction, cost queries, solvers, and IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least 2 data points, got {0}")]
    TooFewPoints(usize),

    #[error("non-finite value at input row {row}: ({x}, {y})")]
    NonFiniteValue { row: usize, x: f64, y: f64 },

    #[error("partitioning built for n = {partitioning} but series has n = {series}")]
    LengthMismatch { series: usize, partitioning: usize },

    #[error("invalid cut indices: {0}")]
    BadPartitioning(String),

    #[error("invalid interval ({a}, {b}] for a series of {n} points")]
    BadInterval { a: usize, b: usize, n: usize },

    #[error("k must be at least 1")]
    KZero,

    #[error("k = {k} exceeds the number of points n = {n}")]
    KTooLarge { k: usize, n: usize },

    #[error("{candidates} candidate cut vectors exceed the enumeration cap of {cap}")]
    EnumerationTooLarge { candidates: u128, cap: u64 },

    #[error("score {0} is outside [0, 1]")]
    OutOfRange(f64),

    #[error("cannot open {path}: {source}")]
    FileNotFound {
        path: String,
        source: std::io::Error,
    },

    #[error("column {0:?} not found in input")]
    ColumnNotFound(String),

    #[error("invalid synthetic spec: {0}")]
    BadSpec(String),

    #[error("malformed csv: {0}")]
    MalformedCsv(#[from] csv::Error),

    #[error("write failed: {0}")]
    WriteFailed(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
