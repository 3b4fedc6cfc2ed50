use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {0} is at a pole of the gamma function")]
    Pole(Complex64),

    #[error("connection formula is ill-conditioned: c - a - b = {0} is close to an integer")]
    DegenerateConnection(Complex64),

    #[error("hypergeometric series did not converge after {0} terms")]
    NonConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("argument outside the domain: {0}")]
    InvalidDomain(String),

    #[error("time {t} outside [0, {blowup}) (blow-up time)")]
    TimeOutOfRange { t: f64, blowup: f64 },

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureFailure { estimate: f64, tolerance: f64 },

    #[error("contour tail estimate {tail:e} exceeds tolerance {tolerance:e}; increase the height")]
    ContourTooShort { tail: f64, tolerance: f64 },

    #[error("CFL number {0} outside (0, 1]")]
    CflViolation(f64),

    #[error("front {front} leaves the grid (x_max = {x_max})")]
    DomainTooSmall { front: f64, x_max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
