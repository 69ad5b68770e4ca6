use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pole of the L-function at s = {0}")]
    Pole(Complex64),

    #[error("requested precision {precision:e} unreachable within {cap} terms at s = {s}")]
    PrecisionUnreachable { s: Complex64, precision: f64, cap: usize },

    #[error("L-function (nearly) vanishes on the continuation ray at s = {0}")]
    ZeroOnPath(Complex64),

    #[error("prime table up to {limit} does not cover x = {needed}")]
    PrimeTableTooSmall { limit: u64, needed: f64 },

    #[error("|F| below the boundary floor at contour point {0}")]
    ZeroNearBoundary(Complex64),

    #[error("maximum subdivision depth exceeded near contour point {0}")]
    MaxDepthExceeded(Complex64),

    #[error("quadrature did not converge on [{a}, {b}] (estimated error {err:e})")]
    QuadratureNonconvergence { a: f64, b: f64, err: f64 },

    #[error("{rejected} of {total} Monte Carlo samples rejected (limit 0.1%)")]
    TooManyRejections { rejected: usize, total: usize },

    #[error("characteristic function has not decayed at the frequency boundary (|phi| = {0:e})")]
    InsufficientDecay(f64),

    #[error("budget exhausted: reached error {reached:e}, target {target:e}")]
    BudgetExhausted { reached: f64, target: f64 },

    #[error("no nonzero Dirichlet coefficient among n <= {0}")]
    NoLeadingCoefficient(u64),

    #[error("cache error: {0}")]
    Cache(String),
}
