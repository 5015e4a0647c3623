use thiserror::Error;

/// Errors raised by the frame calculus.
///
/// Axiom violations of an otherwise well-shaped instance (P² ≠ id, a
/// non-W₁ structure, ...) are reported as data by the validators; only
/// shape problems and preconditions that make an operation meaningless
/// surface here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("frame dimension {0} is not even and at least 4")]
    BadDimension(usize),

    #[error("tensor rank {0} exceeds the supported maximum of 4")]
    RankOverflow(usize),

    #[error("component array has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("slot {slot} out of range for rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },

    #[error("cannot contract slots {0} and {1}: variance mismatch")]
    VarianceMismatch(usize, usize),

    #[error("metric is not symmetric (defect {0:e})")]
    NotSymmetric(f64),

    #[error("metric is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("metric is singular")]
    SingularMetric,

    #[error("structure constants are not antisymmetric (defect {0:e})")]
    NotAntisymmetric(f64),

    #[error("vectors span a degenerate plane (Gram determinant {0:e})")]
    DegeneratePlane(f64),

    #[error("instance is not in class W1 (residual {0:e})")]
    NotW1(f64),

    #[error("1-form is not closed: it does not annihilate the derived subalgebra (defect {0:e})")]
    NotClosed(f64),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
