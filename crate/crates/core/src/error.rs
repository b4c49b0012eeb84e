use thiserror::Error;

/// Errors raised by the algebra, function and transform layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inversion of something that vanishes.
    #[error("singular: {0}")]
    Singular(String),
    /// Incompatible arguments (side mismatch, disjoint domains, malformed specs).
    #[error("usage error: {0}")]
    Usage(String),
    /// Evaluation on the pole sphere of a rational function.
    #[error("pole: {0}")]
    Pole(String),
    /// An operation needs a capability the operand does not have.
    #[error("capability missing: {0}")]
    Capability(String),
    /// Adaptive quadrature ran out of subdivisions before reaching tolerance.
    #[error("quadrature accuracy not reached: achieved {achieved:e}, requested {requested:e}")]
    Accuracy { achieved: f64, requested: f64 },
    /// A stem failed the intrinsic symmetry f(conj z) = conj f(z).
    #[error("invalid stem: {0}")]
    InvalidStem(String),
    /// Exponential-order estimation failed.
    #[error("estimation error: {0}")]
    Estimation(String),
    /// An internal identity that should hold exactly was violated.
    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
