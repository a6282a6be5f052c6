use thiserror::Error;

pub type Result<T> = std::result::Result<T, TetraError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TetraError {
    #[error("degenerate input: volume {volume:.3e} below floor {floor:.3e}")]
    DegenerateInput { volume: f64, floor: f64 },
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("faces {0} and {1} share no edge")]
    NonAdjacent(usize, usize),
    #[error("face sequence backtracks at position {0}")]
    Backtrack(usize),
    #[error("index {0} out of range")]
    InvalidIndex(usize),
    #[error("collinear triangle")]
    Collinear,
    #[error("invalid surface point: {0}")]
    InvalidPoint(String),
    #[error("geodesic search exhausted at {max_faces} faces")]
    SearchExhausted { max_faces: usize },
    #[error("shortest path from source to vertex {vertex} is not unique")]
    AmbiguousCut { vertex: usize },
    #[error("sides ({0}, {1}, {2}) do not form an acute triangle")]
    NotAcute(f64, f64, f64),
    #[error("generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
