use thiserror::Error;

/// Errors produced by graph construction, exact arithmetic and the measure machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("edge {edge} out of range for a graph with {edge_count} edges")]
    EdgeOutOfRange { edge: usize, edge_count: usize },
    #[error("graph has {edges} edges; edge sets hold at most {max}")]
    TooManyEdges { edges: usize, max: usize },
    #[error("{what} of size {size} exceeds the enumeration cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("invalid segments: {0}")]
    InvalidSegments(String),
    #[error("segment {segment} has odd length {length} and cannot carry a midpoint mark")]
    OddMarkedSegment { segment: usize, length: u32 },
    #[error("graph has no mark named `{0}`")]
    MissingMark(String),
    #[error("rational function has a pole at x = {0}")]
    Pole(String),
    #[error("grid must be strictly increasing inside (0, 1): {0}")]
    InvalidGrid(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("distributions live on different graphs")]
    GraphMismatch,
    #[error("x = {0} has irrational sqrt(1 - x^2); pass the Pythagorean parameter t with x = 2t/(1+t^2)")]
    NonPythagorean(String),
    #[error("event `{0}` is not known to be increasing")]
    NotIncreasing(String),
    #[error("could not parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}
