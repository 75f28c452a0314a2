use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph6 parse error at byte {offset}: {message}")]
pub struct Graph6Error {
    pub offset: usize,
    pub message: String,
}

impl Graph6Error {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        Graph6Error {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("graph order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} already present")]
    EdgeAlreadyPresent(usize, usize),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("complete bipartite part sizes must be positive (got {0}, {1})")]
    ZeroPartSize(usize, usize),
    #[error("infinite resistance: graph is disconnected")]
    Disconnected,
    #[error("resistance requires two distinct vertices (got {0} twice)")]
    SameVertex(usize),
    #[error("edge resistance must be strictly positive (edge {0}-{1})")]
    NonPositiveResistance(usize, usize),
    #[error("invalid reduction: {0}")]
    InvalidReduction(String),
    #[error("substitution is not equivalent on terminals {u},{v}: original {original}, replacement {replacement}")]
    NotEquivalent {
        u: usize,
        v: usize,
        original: String,
        replacement: String,
    },
    #[error("deleting edge {0}-{1} disconnects the graph")]
    EdgeDisconnects(usize, usize),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
