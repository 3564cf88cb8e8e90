use thiserror::Error;

/// Errors produced by the exact pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid stencil bounds: lower {lower} must be strictly below upper {upper}")]
    InvalidStencilBounds { lower: i64, upper: i64 },

    #[error("lattice spacing must be positive, got {0}")]
    NonPositiveSpacing(String),

    #[error("moment system for stencil [{lower}, {upper}] is singular")]
    SingularMoments { lower: i64, upper: i64 },

    #[error("lattice index {index} is outside the trajectory range 0..{len}")]
    IndexOutOfRange { index: i64, len: usize },

    #[error("need coefficients up to index {needed}, only {available} available")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("kernel degree must be positive")]
    ZeroKernelDegree,

    #[error("kernel expects {expected} indices, got {got}")]
    KernelArity { expected: usize, got: usize },

    #[error("kernel indices k1 = {k1}, k2 = {k2} exceed n = {n}")]
    KernelOutsideSimplex { n: u64, k1: u64, k2: u64 },

    #[error("vector field of degree {degree} is unsupported here (maximum {max})")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("leading coefficient a2 must be nonzero for the quadratic closed form")]
    DegenerateQuadratic,

    #[error("closed form is not defined at t = {t}: {reason}")]
    Domain { t: f64, reason: &'static str },

    #[error("cubic solution needs a3 < 0 and c0 > 0")]
    CubicParameters,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
