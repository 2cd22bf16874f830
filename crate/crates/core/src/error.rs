use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// A point lies outside the chart domain, or the lifted metric degenerates
    /// (`A + 2tv <= 0`).
    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("holomorphic sectional curvature is undefined for the zero vector")]
    ZeroVector,
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
