use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("edge ({0}, {1}) is not present in the graph")]
    EdgeNotPresent(usize, usize),
    #[error("invalid edge ({0}, {1}): self-loops are not allowed")]
    SelfLoop(usize, usize),
    #[error("operation requires at least one edge")]
    EmptyEdgeSet,
    #[error("no simple {degree}-regular graph on {n} nodes")]
    InfeasibleDegreeSequence { degree: usize, n: usize },
    #[error("random regular construction gave up after {0} restarts")]
    RestartLimit(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph is not regular")]
    NotRegular,
    #[error("exact division left a non-zero remainder")]
    NonZeroRemainder,
    #[error("eigensolver did not converge within {0} sweeps")]
    ConvergenceFailure(usize),
    #[error("{what} limited to {cap} nodes, got {n}")]
    TooLarge { what: &'static str, n: usize, cap: usize },
    #[error("level {level} outside 1..={height}")]
    LevelOutOfRange { level: usize, height: usize },
    #[error("bit vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("MaxCut value is zero; approximation ratio undefined")]
    ZeroCut,
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("empty input")]
    EmptyInput,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("perturbation relation violated: {0}")]
    RelationViolated(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NodeOutOfRange { .. } => "NodeOutOfRange",
            Error::EdgeNotPresent(..) => "EdgeNotPresent",
            Error::SelfLoop(..) => "SelfLoop",
            Error::EmptyEdgeSet => "EmptyEdgeSet",
            Error::InfeasibleDegreeSequence { .. } => "InfeasibleDegreeSequence",
            Error::RestartLimit(_) => "RestartLimit",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NotATree => "NotATree",
            Error::NotRegular => "NotRegular",
            Error::NonZeroRemainder => "NonZeroRemainder",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::TooLarge { .. } => "TooLarge",
            Error::LevelOutOfRange { .. } => "LevelOutOfRange",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ZeroCut => "ZeroCut",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::EmptyInput => "EmptyInput",
            Error::InsufficientData(_) => "InsufficientData",
            Error::RelationViolated(_) => "RelationViolated",
        }
    }
}
