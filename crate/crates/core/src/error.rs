use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid index subset: {0}")]
    Subset(String),

    #[error("matrix has rank {found}, expected {expected}")]
    RankDeficient { expected: usize, found: usize },

    #[error("lattice containment violated: {0}")]
    Containment(String),

    #[error("polytope has non-integral vertex {0}")]
    NonIntegral(String),

    #[error("invalid block structure: {0}")]
    Blocks(String),

    #[error("invalid basis system: {0}")]
    Bases(String),

    #[error("rank collapse: {0}")]
    RankCollapse(String),

    #[error("not a polymatroid polytope")]
    NotPolymatroidPolytope,

    #[error("configuration has {found} labels, cap is {cap}")]
    CapExceeded { found: usize, cap: usize },

    #[error("non-generic input: {0}")]
    NonGeneric(String),

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
