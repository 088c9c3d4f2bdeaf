use thiserror::Error;

/// Errors raised by the jet, linear algebra and invariant layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable index {index} out of range for {n_vars} variables")]
    IndexOutOfRange { index: usize, n_vars: usize },

    #[error("jet context mismatch: ({0}, {1}) vs ({2}, {3})")]
    ContextMismatch(usize, usize, usize, usize),

    #[error("multi-index of degree {degree} exceeds jet degree {max_degree}")]
    DegreeOverflow { degree: usize, max_degree: usize },

    #[error("fractional power needs a positive constant term, got {0}")]
    NonPositiveBase(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("degenerate hypersurface: det h = {0:e}")]
    DegenerateHypersurface(f64),

    #[error("hypersurface is not locally strongly convex at this point")]
    NotConvex,

    #[error("affine normal is tangential (frame determinant {0:e})")]
    TangentialNormal(f64),

    #[error("jet backend unavailable for chart `{0}`")]
    UnsupportedBackend(String),

    #[error("non-finite value in chart evaluation")]
    NonFinite,

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("unknown model label `{0}`")]
    UnknownLabel(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
