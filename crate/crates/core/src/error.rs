use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation `{op}` is not supported on the {backend} backend")]
    UnsupportedBackend { op: &'static str, backend: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("configuration has a single center, no pairs to compare")]
    NoPairs,

    #[error("resolvent kernel diverges at zero distance; diagonal entries go through the renormalized operator")]
    Divergence,

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },

    #[error("no eigenvalue crossing found below nu = {nu_hi}; try a certificate to bound the search")]
    NoCrossing { nu_hi: f64 },

    #[error("principal matrix is singular at nu = {nu} (bound state at E = {energy})")]
    AtBoundState { nu: f64, energy: f64 },

    #[error("series diverges: nu = {nu} must exceed the critical value {critical_nu}")]
    Threshold { nu: f64, critical_nu: f64 },

    #[error("bound invalid: nu = {nu} violates the packing validity condition, need nu >= {required_nu}")]
    Validity { nu: f64, required_nu: f64 },

    #[error("quadrature did not converge: value {value:e}, error estimate {error:e}")]
    Quadrature { value: f64, error: f64 },

    #[error("certificate does not apply to this configuration: {0}")]
    IncompatibleCertificate(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
