use thiserror::Error;

/// Errors raised by graph construction, parsing and the verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has {0} vertices, at most 64 are supported")]
    TooManyVertices(usize),

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    #[error("vertex {0} already present")]
    DuplicateVertex(u32),

    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),

    #[error("line {line}: {msg}")]
    EdgeList { line: usize, msg: String },

    #[error("graph6 byte {offset}: {msg}")]
    Graph6 { offset: usize, msg: String },

    #[error("invalid document: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("certificate step {step}: {reason}")]
    Certificate { step: usize, reason: String },

    #[error("{what}: size {size} exceeds limit {limit}")]
    OverLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),
}

pub type Result<T> = std::result::Result<T, Error>;
