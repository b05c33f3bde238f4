use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix has a nonzero diagonal entry at index {0}")]
    NonzeroDiagonal(usize),

    #[error("matrix is not an EDM: projected Gram has eigenvalue {min_eigenvalue:e}")]
    NotEdm { min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("b not in column space (relative residual {residual:e})")]
    NotInColumnSpace { residual: f64 },

    #[error("EDM is not spherical")]
    NotSpherical,

    #[error("full embedding dimension: Gale space is empty")]
    FullEmbeddingDimension,

    #[error("no two-distance representation exists for a complete or null graph")]
    Degenerate,

    #[error("{0} endpoint does not exist for this graph")]
    MissingEndpoint(&'static str),

    #[error("beta = {beta} is infeasible: projected Gram eigenvalue {eigenvalue:e}")]
    Infeasible { beta: f64, eigenvalue: f64 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
