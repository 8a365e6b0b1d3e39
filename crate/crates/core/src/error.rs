use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    /// `l` is not a multiple of the Clifford module dimension.
    #[error("l = {l} is not a multiple of delta({m}) = {minimal}; smallest admissible l is {minimal}")]
    InadmissibleDimension { m: usize, l: usize, minimal: usize },

    #[error("projection did not converge after {iterations} iterations (residual {residual:e})")]
    Projection { iterations: usize, residual: f64 },

    #[error("sampling failed: {0}")]
    Sampling(String),

    /// Constraint gradients are dependent at the point.
    #[error("frame error: {0}")]
    Frame(String),

    #[error("near-focal point: |f(z)| = {value} is within 1e-6 of 1")]
    NearFocal { value: f64 },

    #[error("integration error: {0}")]
    Integration(String),

    #[error("numerical error: {0}")]
    Numeric(String),

    /// A deserialized object failed re-validation.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
