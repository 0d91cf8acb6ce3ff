use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed graph6 encoding: {0}")]
    MalformedEncoding(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("no graph satisfying the constraints within {attempts} attempts")]
    GenerationExhausted { attempts: usize },
    #[error("Kneser graph K({n},{k}) has {vertices} vertices, above the cap of {cap}")]
    TooLarge { n: usize, k: usize, vertices: u128, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("map shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("configuration match no longer valid on this graph")]
    StaleMatch,
    #[error("vertex sequence is not an induced path of length >= 2")]
    NotInducedPath,
    #[error("coloring is not a homomorphism into the given Kneser graph")]
    TargetMismatch,
    #[error("discharging did not terminate within {cap} rounds")]
    NonTermination { cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
