use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph on {n} vertices exceeds the vertex cap {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("infeasible degree: {0}")]
    InfeasibleDegree(String),
    #[error("{what}: work budget of {limit} node expansions exhausted")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("{what}: size {size} exceeds the supported limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("anchor not an edge: {0}")]
    AnchorNotEdge(String),
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal verification failed: {0}")]
    Verification(String),
    #[error("no homomorphism: {0}")]
    NoHomomorphism(String),
    #[error("unknown construction `{0}`")]
    UnknownConstruction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
