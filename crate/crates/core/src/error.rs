use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("zero denominator in entry `{0}`")]
    ZeroDenominator(String),

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("matrix is singular")]
    Singular,

    #[error("containment violation: inner subspace (dim {inner}) is not contained in outer (dim {outer})")]
    NotNested { outer: usize, inner: usize },

    #[error("subspace is not invariant under the operator")]
    NotInvariant,

    #[error("pair does not reduce the operator")]
    NotReducing,

    #[error("restriction to the first component is not invertible")]
    SingularRestriction,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("invalid campaign config: {0}")]
    InvalidConfig(String),
}
