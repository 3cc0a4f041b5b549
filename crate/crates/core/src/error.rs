use thiserror::Error;

/// Errors raised by the symbolic core, the operator assembly and the sweeps.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("symbol is not smooth at infinity: deg_z = {deg_z}, deg_zbar = {deg_zbar}, denominator exponent = {denom_exp}")]
    NotSmoothAtInfinity {
        deg_z: u32,
        deg_zbar: u32,
        denom_exp: u32,
    },
    #[error("basis index {index} out of range for level {level}")]
    IndexOutOfRange { index: u32, level: u32 },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("quadrature budget too small: hermiticity defect {defect:e} for a real integrand")]
    QuadratureBudgetTooSmall { defect: f64 },
    #[error("star-product coefficient of order {order} is not available (only C0 and C1 are known)")]
    UnknownCoefficientOrder { order: usize },
    #[error("degenerate convergence table: {0}")]
    DegenerateTable(String),
    #[error("divergent pairing integral: t^{power} against (1+t)^-{decay}")]
    DivergentIntegral { power: u32, decay: u32 },
    #[error("{0} requires a real symbol")]
    NotReal(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
