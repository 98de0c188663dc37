use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The `code()` of each variant is a stable upper-case identifier used in
/// CSV outputs and CLI diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("vertices {from} and {to} are in different components")]
    InfiniteDistance { from: usize, to: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("vertex {0} is outside the potential's domain")]
    Domain(usize),

    #[error("oracle limit exceeded: {0} atoms (max {1})")]
    OracleLimit(usize, usize),

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),

    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid k: {k} exceeds {max} candidate pairs")]
    InvalidK { k: usize, max: usize },

    #[error("plan infeasible: {0}")]
    PlanInfeasible(String),

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("empty input")]
    EmptyInput,

    #[error("graph has no intercommunity edges")]
    NoInterEdges,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "DIMENSION",
            Error::Parse { .. } => "PARSE",
            Error::InvalidGraph(_) => "INVALID_GRAPH",
            Error::InvalidPartition(_) => "INVALID_PARTITION",
            Error::InfiniteDistance { .. } => "INFINITE_DISTANCE",
            Error::InvalidMeasure(_) => "INVALID_MEASURE",
            Error::Domain(_) => "DOMAIN_ERROR",
            Error::OracleLimit(..) => "ORACLE_LIMIT",
            Error::IsolatedVertex(_) => "ISOLATED_VERTEX",
            Error::NotAnEdge(..) => "NOT_AN_EDGE",
            Error::InvalidAlpha(_) => "INVALID_ALPHA",
            Error::InvalidSize(_) => "INVALID_SIZE",
            Error::InvalidK { .. } => "INVALID_K",
            Error::PlanInfeasible(_) => "PLAN_INFEASIBLE",
            Error::InternalContradiction(_) => "INTERNAL_CONTRADICTION",
            Error::EmptyInput => "EMPTY_INPUT",
            Error::NoInterEdges => "NO_INTER_EDGES",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
