use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("non-positive price {value} on line {line} for symbol `{symbol}`")]
    NonPositivePrice { line: u64, symbol: String, value: f64 },
    #[error("non-numeric price `{cell}` on line {line} for symbol `{symbol}`")]
    NonNumericPrice { line: u64, symbol: String, cell: String },
    #[error("missing price on line {line} for symbol `{symbol}`")]
    MissingCell { line: u64, symbol: String },
    #[error("invalid date `{value}` on line {line}")]
    InvalidDate { line: u64, value: String },
    #[error("dates are not strictly increasing at line {line}")]
    DatesNotIncreasing { line: u64 },
    #[error("row on line {line} has {found} cells, expected {expected}")]
    RaggedRow { line: u64, found: usize, expected: usize },
    #[error("panel has {rows} rows, at least {min} are required")]
    TooFewRows { rows: usize, min: usize },
    #[error("panel has {0} symbols, at least 2 are required")]
    TooFewSymbols(usize),
    #[error("lag {lag} must be positive and smaller than the number of rows ({rows})")]
    InvalidLag { lag: usize, rows: usize },
    #[error("zero-variance return columns: {}", .0.join(", "))]
    ZeroVarianceColumn(Vec<String>),
    #[error("fraction {0} is outside [0, 1]")]
    InvalidFraction(f64),
    #[error("invalid q grid: {0}")]
    InvalidGrid(String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("clique enumeration exceeded its budget after {steps} steps ({cliques_found} cliques found)")]
    BudgetExceeded { steps: u64, cliques_found: usize },
    #[error("clique set was not computed from this graph")]
    FingerprintMismatch,
    #[error("clique size k = {0} is invalid, k must be at least 3")]
    InvalidK(usize),
    #[error("no sector label for symbol `{0}`")]
    MissingLabel(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("spanning tree needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("invalid edge ({i}, {j}): {reason}")]
    InvalidEdge { i: usize, j: usize, reason: &'static str },
    #[error("window {t} has only {available} predecessors, tau = {tau} requested")]
    InsufficientHistory { t: usize, tau: usize, available: usize },
    #[error("current edge set is empty")]
    EmptyEdgeSet,
    #[error("window `{label}` has {rows} rows, at least 3 are required")]
    WindowTooShort { label: String, rows: usize },
    #[error("invalid market spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
