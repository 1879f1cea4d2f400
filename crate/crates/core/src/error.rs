use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not unitary (max deviation from identity {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("spectrum vectors are not orthonormal (max deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error(
        "{count} regular tableaux exceed the exhaustive threshold {threshold}; use the heuristic search"
    )]
    ExhaustiveRefused { count: String, threshold: String },

    #[error("canonicalization did not reach a decreasing matrix within {passes} passes")]
    NonTermination { passes: usize },

    #[error("depth-first search needs at least one seed tableau")]
    NoSeeds,
}
