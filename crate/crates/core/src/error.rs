use thiserror::Error;

/// Problems found while reading or validating a graph document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("graph has no vertices")]
    NoVertices,
    #[error("vertex `{0}` is listed more than once")]
    DuplicateVertex(String),
    #[error("edge refers to unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("loop edge at vertex `{0}`")]
    Loop(String),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("root `{0}` is not a vertex of the graph")]
    UnknownRoot(String),
    #[error("invalid edge order: {0}")]
    BadOrder(String),
    #[error("graph has {0} edges; at most {max} are supported", max = crate::graph::MAX_EDGES)]
    TooManyEdges(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {0} is not in the tree")]
    EdgeNotInTree(usize),
    #[error("edge {0} is already in the tree")]
    EdgeInTree(usize),
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
    #[error("no image tree: the cycle of edge {0} has no internally live edge")]
    NoImageTree(usize),
    #[error("edge {0} is not internally dead in the tree")]
    NotInternallyDead(usize),
    #[error("{what}: graph has {actual} edges, limit is {limit}")]
    LimitExceeded { what: &'static str, limit: usize, actual: usize },
    #[error("m must be at least 2, got {0}")]
    BadAlgebra(u32),
    #[error("differential does not square to zero at (i={i}, j={j})")]
    NotAComplex { i: usize, j: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
