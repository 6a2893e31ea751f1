use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("the apex of the light cone is excluded")]
    ApexExcluded,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite value at momentum ({:.6e}, {:.6e}, {:.6e})", .at[0], .at[1], .at[2])]
    Numerical { at: [f64; 3] },

    #[error("SL(2,C) element has determinant {re:.3e}{im:+.3e}i, expected 1")]
    InvalidSpinor { re: f64, im: f64 },

    #[error("radius {r:.3e} outside the supported range [1e-6, 1e6]")]
    Range { r: f64 },

    #[error("momentum lies within the axis convention zone")]
    AxisZone,

    #[error("finite-difference stencil shrank below {min_step:e} without converging")]
    StencilUnderflow { min_step: f64 },

    #[error("oscillatory quadrature unreliable: estimated error {estimated_error:.3e} vs scale {scale:.3e}")]
    OscillationWarning {
        value: [num_complex::Complex64; 4],
        estimated_error: f64,
        scale: f64,
    },

    #[error("degenerate input: Gram condition number {condition:.3e}")]
    DegenerateInput { condition: f64 },

    #[error("second-quantized symmetry is not an involution (deviation {deviation:.3e})")]
    InvolutionBroken { deviation: f64 },

    #[error(
        "test function lies outside the mode span (relative residual {residual:.3e} > {bound:.3e})"
    )]
    SpanResidualTooLarge { residual: f64, bound: f64 },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
