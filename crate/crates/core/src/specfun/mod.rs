//! Complex-argument special functions.

mod gamma;
mod hyp2f1;

pub use gamma::{
    cospi, digamma, gamma, gamma_ratio, is_nonpositive_integer, log_gamma, rgamma, sinpi, POLE_TOL,
};
pub use hyp2f1::{gauss_sum, hyp2f1, DEGENERATE_TOL, MAX_TERMS, Z_SWITCH};

/// Complex scalar used for Mellin variables, roots and hypergeometric parameters.
pub type ComplexScalar = num_complex::Complex64;
