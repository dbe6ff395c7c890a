use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the library operations.
///
/// Degenerate cones are not errors: `classify2` reports them through
/// [`crate::normalform2::DegeneracyReport`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("monomial of degree {degree} in a quadratic form (term {index})")]
    NonHomogeneous { index: usize, degree: usize },

    #[error("coefficient of term {index} is not real: {coeff}")]
    NonReal { index: usize, coeff: Complex64 },

    #[error("unknown variable `{0}` (expected x1..xn or y1..yn)")]
    UnknownVariable(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("matrix is not hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("only {found} of {requested} cone samples found within the iteration budget")]
    InsufficientSamples { requested: usize, found: usize },

    #[error("point is not on the cone (residual {residual:e})")]
    OffCone { residual: f64 },

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("determinant {det:e} is positive; no SO(1,1) element zeroes a diagonal entry")]
    PositiveDeterminant { det: f64 },

    #[error("no SO(1,1) element zeroes a diagonal entry (rank-one light-like matrix)")]
    NoZeroingElement,

    #[error("matrix does not preserve Im(z1 conj z2) (deviation {deviation:e})")]
    NotPreserver { deviation: f64 },

    #[error("change of variables is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("normal form {0} has no one-sided disc family")]
    NotOneSided(String),

    #[error("verification failed at eps = {eps:e}: margin {margin:e} at z = {point:?}")]
    VerificationFailed {
        eps: f64,
        margin: f64,
        point: Vec<Complex64>,
    },

    #[error("slice basis is degenerate (gram determinant {det:e})")]
    DegenerateBasis { det: f64 },

    #[error("quadratic part in the trailing variables is nonzero (norm {norm:e})")]
    QNotZero { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
