use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lambda must lie in (0, 1], got {0}")]
    InvalidLambda(f64),

    #[error("Schur parameter {index} has modulus {modulus} outside the closed unit disk")]
    SchurOutOfDisk { index: usize, modulus: f64 },

    #[error("sample count must be at least 1")]
    EmptySample,

    #[error("length mismatch: {p} p-coefficients against {z} z-entries")]
    LengthMismatch { p: usize, z: usize },

    #[error("empty coefficient sequence")]
    EmptySequence,

    /// `F(1, t)` is linear in `t`; there is no interior vertex.
    #[error("F(lambda, t) is linear at lambda = 1; no vertex")]
    Degenerate,

    #[error("invalid search settings: {0}")]
    InvalidSearch(String),

    #[error("lambda grid is empty")]
    EmptyGrid,

    #[error("malformed grid spec {0:?}; expected a real or start:stop:count")]
    GridSpec(String),
}
