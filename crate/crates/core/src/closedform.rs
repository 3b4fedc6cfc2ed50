//! The explicit solution: a Dirac atom riding the growth characteristic plus a
//! hypergeometric regular part cut off at the moving front, together with its
//! Mellin transform, moments and blow-up asymptotics.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, RadialGrid};
use crate::model::ProblemParams;
use crate::specfun::{gamma_ratio, hyp2f1};

/// Relative window around the front inside which a point counts as on it.
const FRONT_WINDOW: f64 = 1e-14;
/// `r` values this close to 1 use the logarithmic branch.
const R_ONE_TOL: f64 = 1e-12;

/// The singular part of the solution, `mass * delta(x - location)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomComponent {
    pub location: f64,
    pub mass: f64,
}

impl AtomComponent {
    /// `mass * location^(s-1)`, the atom's Mellin transform.
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        self.mass * ((s - 1.0) * self.location.ln()).exp()
    }
}

/// `1 - gamma t`, after checking `0 <= t < 1/gamma`.
pub fn remaining(params: &ProblemParams, t: f64) -> Result<f64> {
    let tau = 1.0 - params.gamma * t;
    if !(t >= 0.0 && tau > 0.0) {
        return Err(Error::TimeOutOfRange { t, blowup: params.blowup_time() });
    }
    Ok(tau)
}

pub fn atom_state(params: &ProblemParams, t: f64) -> Result<AtomComponent> {
    let tau = remaining(params, t)?;
    let g = params.gamma;
    Ok(AtomComponent { location: tau.powf(-1.0 / g), mass: tau.powf(1.0 / g) })
}

/// Position of the front, `(1 - gamma t)^(-1/gamma)`; equal to the atom location.
pub fn front(params: &ProblemParams, t: f64) -> Result<f64> {
    Ok(atom_state(params, t)?.location)
}

/// Height of the jump of the regular part at the front, `theta t (1 - gamma t)^(2/gamma)`.
pub fn front_jump(params: &ProblemParams, t: f64) -> Result<f64> {
    let tau = remaining(params, t)?;
    Ok(params.theta * t * tau.powf(2.0 / params.gamma))
}

/// Regular part as a complex number; the imaginary part is rounding residue.
pub fn u_regular_complex(params: &ProblemParams, t: f64, x: f64) -> Result<Complex64> {
    let tau = remaining(params, t)?;
    if !(x > 0.0) {
        return Err(Error::InvalidDomain(format!("x must be > 0, got {x}")));
    }
    let g = params.gamma;
    // 1 + (gamma t - 1) x^gamma, which changes sign at the front
    let w = 1.0 - tau * x.powf(g);
    if w < -FRONT_WINDOW {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let z = (g * t * w).clamp(0.0, g * t);
    let a = 1.0 + params.sigma1 / g;
    let b = 1.0 + params.sigma2 / g;
    let f = hyp2f1(a, b, Complex64::new(2.0, 0.0), z)?;
    Ok(params.theta * tau.powf(2.0 / g) * t * f)
}

/// Density of the absolutely continuous part at `(t, x)`.
pub fn u_regular(params: &ProblemParams, t: f64, x: f64) -> Result<f64> {
    Ok(u_regular_complex(params, t, x)?.re)
}

fn check_s(s: Complex64) -> Result<()> {
    if s.re > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("Re s must be > 0, got {s}")))
    }
}

/// Mellin transform of the full solution,
/// `F((s - sigma1)/gamma, (s - sigma2)/gamma; s/gamma; gamma t)`.
pub fn omega(params: &ProblemParams, t: f64, s: Complex64) -> Result<Complex64> {
    check_s(s)?;
    remaining(params, t)?;
    let g = params.gamma;
    hyp2f1((s - params.sigma1) / g, (s - params.sigma2) / g, s / g, g * t)
}

/// Euler-transformed form `(1 - gamma t)^((2-s)/gamma) F(sigma1/gamma, sigma2/gamma; s/gamma; gamma t)`.
pub fn omega_euler(params: &ProblemParams, t: f64, s: Complex64) -> Result<Complex64> {
    check_s(s)?;
    let tau = remaining(params, t)?;
    let g = params.gamma;
    let pre = ((2.0 - s) / g * tau.ln()).exp();
    Ok(pre * hyp2f1(params.sigma1 / g, params.sigma2 / g, s / g, g * t)?)
}

/// `int x^r u(t, dx)` for complex `r`, i.e. `Omega(t, r + 1)`.
pub fn complex_moment(params: &ProblemParams, t: f64, r: Complex64) -> Result<Complex64> {
    omega(params, t, r + 1.0)
}

/// Moment of order `r > -1`, atom included.
pub fn moment(params: &ProblemParams, t: f64, r: f64) -> Result<f64> {
    if !(r > -1.0) {
        return Err(Error::InvalidDomain(format!("moment order must be > -1, got {r}")));
    }
    Ok(complex_moment(params, t, Complex64::new(r, 0.0))?.re)
}

/// Limit of the suitably scaled moment of order `r` as `gamma t -> 1`.
///
/// * `r > 1`: `G((r+1)/g) G((r-1)/g) / (G((r+1-sigma1)/g) G((r+1-sigma2)/g))`
/// * `r < 1`: `G((r+1)/g) G((1-r)/g) / (G(sigma1/g) G(sigma2/g))`
/// * `r = 1`: `G(2/g) / (G(sigma1/g) G(sigma2/g))`, the coefficient of the
///   logarithmic divergence of the first moment.
pub fn blowup_constant(params: &ProblemParams, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidDomain(format!("blow-up order must be > 0, got {r}")));
    }
    let g = params.gamma;
    let (s1, s2) = (params.sigma1, params.sigma2);
    let re = |x: f64| Complex64::new(x, 0.0);
    let value = if (r - 1.0).abs() < R_ONE_TOL {
        gamma_ratio(&[re(2.0 / g)], &[s1 / g, s2 / g])?
    } else if r > 1.0 {
        gamma_ratio(
            &[re((r + 1.0) / g), re((r - 1.0) / g)],
            &[(r + 1.0 - s1) / g, (r + 1.0 - s2) / g],
        )?
    } else {
        gamma_ratio(&[re((r + 1.0) / g), re((1.0 - r) / g)], &[s1 / g, s2 / g])?
    };
    Ok(value.re)
}

/// Scaling applied to the moment of order `r` in the blow-up statement.
pub fn blowup_scaling(params: &ProblemParams, t: f64, r: f64) -> Result<f64> {
    let tau = remaining(params, t)?;
    if (r - 1.0).abs() < R_ONE_TOL {
        if t <= 0.0 {
            return Err(Error::TimeOutOfRange { t, blowup: params.blowup_time() });
        }
        Ok(-1.0 / tau.ln())
    } else if r > 1.0 {
        Ok(tau.powf((r - 1.0) / params.gamma))
    } else {
        Ok(1.0)
    }
}

/// Moment times its blow-up scaling; tends to [`blowup_constant`] as `gamma t -> 1`.
pub fn scaled_moment(params: &ProblemParams, t: f64, r: f64) -> Result<f64> {
    Ok(moment(params, t, r)? * blowup_scaling(params, t, r)?)
}

/// Limit of the regular part at blow-up, `g G(2/g) / (G(sigma1/g) G(sigma2/g)) (1 + x^g)^(-2/g)`.
pub fn profile_limit(params: &ProblemParams, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidDomain(format!("x must be > 0, got {x}")));
    }
    Ok(profile_constant(params)? * (1.0 + x.powf(params.gamma)).powf(-2.0 / params.gamma))
}

/// Value of the limit profile at `x = 0`.
pub fn profile_constant(params: &ProblemParams) -> Result<f64> {
    let g = params.gamma;
    let c = gamma_ratio(&[Complex64::new(2.0 / g, 0.0)], &[params.sigma1 / g, params.sigma2 / g])?;
    Ok(g * c.re)
}

/// The solution at one instant: the atom plus the regular part sampled on a grid.
#[derive(Debug, Clone)]
pub struct SolutionSnapshot {
    pub t: f64,
    pub atom: AtomComponent,
    pub regular: GridFunction,
    pub params: ProblemParams,
}

impl SolutionSnapshot {
    /// Samples the regular part at the cell centres of `grid`.
    pub fn new(params: &ProblemParams, t: f64, grid: RadialGrid) -> Result<Self> {
        let atom = atom_state(params, t)?;
        let regular = GridFunction::sample(grid, |x| u_regular(params, t, x))?;
        Ok(Self { t, atom, regular, params: *params })
    }

    /// Exact density of the regular part at `x`.
    pub fn density(&self, x: f64) -> Result<f64> {
        u_regular(&self.params, self.t, x)
    }

    pub fn front(&self) -> f64 {
        self.atom.location
    }
}
