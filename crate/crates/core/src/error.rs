use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A precondition of the called operation does not hold.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("matrix is not singular (smallest singular value {smallest:e} > {delta:e})")]
    NotSingular { smallest: f64, delta: f64 },

    /// Corank (or kernel dimension) differs from what a regular point has.
    #[error("non-regular point: {0}")]
    NonRegular(String),

    #[error("not an immersion here: Gram determinant {0:e}")]
    NotImmersion(f64),

    #[error("singular point: gradient norm {0:e}")]
    SingularPoint(f64),

    #[error("size unsupported for derivatives: {0}")]
    SizeUnsupported(String),

    #[error("sampling exhausted after {attempts} attempts (stream {stream})")]
    SamplingExhausted { attempts: usize, stream: u64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}
