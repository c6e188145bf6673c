use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid symbol {symbol:?} at position {position}; expected one of A, C, G, T")]
    InvalidSymbol { symbol: char, position: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlignError {
    #[error("margin grace size t = {t} must be non-negative and below half the string length ({length})")]
    MarginTooLarge { t: f64, length: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error("empty read set")]
    EmptyReadSet { label: String },
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(
        "read set {label:?} has no declared coverage; supply it (--coverage or a #coverage= line) or disable sampling"
    )]
    MissingCoverage { label: String },
    #[error("invalid match configuration: {0}")]
    InvalidConfig(String),
    #[error("read set {label:?}: {source}")]
    Set {
        label: String,
        #[source]
        source: Box<DistanceError>,
    },
    #[error("at least two read sets are required, got {0}")]
    TooFewSets(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("sequence {id:?} has length {length}, shorter than the read length {read_length}")]
    SequenceTooShort {
        id: String,
        length: usize,
        read_length: usize,
    },
    #[error("coverage too low: {alpha} x {length} / {read_length} yields no reads for {id:?}")]
    CoverageTooLow {
        id: String,
        alpha: f64,
        length: usize,
        read_length: usize,
    },
    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhyloError {
    #[error("distance matrix must hold at least {required} items, got {actual}")]
    TooFewItems { required: usize, actual: usize },
    #[error("cluster count k = {k} outside the valid range 2..={max}")]
    ClusterCountOutOfRange { k: usize, max: usize },
    #[error("label sets differ; only in first: {only_first:?}; only in second: {only_second:?}")]
    LabelMismatch {
        only_first: Vec<String>,
        only_second: Vec<String>,
    },
    #[error("clusterings have different block counts ({0} vs {1})")]
    BlockCountMismatch(usize, usize),
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Symbol {
        line: usize,
        #[source]
        source: ModelError,
    },
    #[error("invalid label {0:?}: labels must be non-empty, whitespace-free and at most 64 characters")]
    InvalidLabel(String),
    #[error("newick: {0}")]
    Newick(String),
    #[error(transparent)]
    Phylo(#[from] PhyloError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
