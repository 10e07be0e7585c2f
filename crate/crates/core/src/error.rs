use thiserror::Error;

/// Errors raised by the algebraic constructions.
///
/// Variants split into two families: input problems (bad shapes, invalid
/// quadratic data, truncation too small for the requested computation) and
/// internal-consistency failures, which mean a structural identity that must
/// hold did not. [`Error::is_consistency_failure`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("image of source basis vector {index} is not contained in the target subspace")]
    ImageNotContained { index: usize },

    #[error("truncation overflow: weight {weight} exceeds truncation {truncation}")]
    TruncationOverflow { weight: usize, truncation: usize },

    #[error("weight {weight} is out of the computed range (maximum {max})")]
    WeightOutOfRange { weight: usize, max: usize },

    #[error("cup product does not annihilate the symmetric tensor e{i}⊗e{j} + e{j}⊗e{i}")]
    SymmetricTensorViolation { i: usize, j: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid Hopf table: {0}")]
    InvalidHopfTable(String),

    #[error("invalid comodule: {0}")]
    InvalidComodule(String),

    #[error("comodule is not nilpotent: socle filtration stops at dimension {reached} of {dim}")]
    NotNilpotent { reached: usize, dim: usize },

    #[error("embedding is not injective (rank {rank} < {dim})")]
    EmbeddingNotInjective { rank: usize, dim: usize },

    #[error("embedding does not intertwine coproducts at basis element {0}")]
    EmbeddingNotCoalgebraMap(usize),

    #[error("closure violation: {0}")]
    ClosureViolation(String),

    #[error("pointed morphism {0}")]
    PointedMorphism(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// True when the error signals a broken structural identity rather than
    /// bad input.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(
            self,
            Error::ClosureViolation(_)
                | Error::PointedMorphism(_)
                | Error::Consistency(_)
                | Error::ImageNotContained { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
