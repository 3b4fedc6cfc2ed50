//! Explicit blow-up solution of the growth-fragmentation equation
//! `u_t + (x^(gamma+1) u)_x + x^gamma u = theta int_x^inf y^(gamma-1) u(y) dy`
//! started from a unit Dirac mass at `x = 1`.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// coefficient tables are kept exactly as published
#![allow(clippy::excessive_precision)]

pub mod checks;
pub mod cli;
pub mod closedform;
pub mod error;
pub mod grid;
pub mod mellin;
pub mod model;
pub mod pdesolver;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use grid::{GridFunction, RadialGrid, Spacing};
pub use model::{make_params, PhiInfimum, ProblemParams};
