//! Numerical Mellin analysis of the explicit solution: forward transforms by
//! quadrature, inversion along a vertical contour, the functional equation in
//! `t`, and the beta-type integrals behind the series form of the regular part.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::closedform::{self, front, omega, omega_euler, remaining, SolutionSnapshot};
use crate::error::{Error, Result};
use crate::model::ProblemParams;
use crate::quad::{integrate_adaptive, pairwise_sum};
use crate::specfun::{gamma_ratio, hyp2f1};

/// Relative tolerance of the forward transform quadrature.
const FORWARD_REL_TOL: f64 = 1e-11;
/// The substitution `x = front * exp(-y)` is cut at `y = DECAY / Re s`.
const DECAY: f64 = 45.0;
/// Fraction of the contour nodes (from the top) used to fit the decay constant.
const TAIL_FIT_FRACTION: f64 = 0.05;
/// Minimum distance from the front for pointwise inversion.
const FRONT_EXCLUSION: f64 = 1e-6;

/// Vertical contour `Re s = s0, |Im s| <= height`, sampled with `nodes` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub s0: f64,
    pub height: f64,
    pub nodes: usize,
    /// Largest acceptable estimate of the truncated tail.
    pub tolerance: f64,
}

impl ContourSpec {
    pub const DEFAULT_TOLERANCE: f64 = 1e-4;

    pub fn new(s0: f64, height: f64, nodes: usize) -> Result<Self> {
        Self::with_tolerance(s0, height, nodes, Self::DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(s0: f64, height: f64, nodes: usize, tolerance: f64) -> Result<Self> {
        if !(s0 > 0.0 && s0.is_finite()) {
            return Err(Error::InvalidParam(format!("contour abscissa must be > 0, got {s0}")));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::InvalidParam(format!("contour height must be > 0, got {height}")));
        }
        if nodes < 16 {
            return Err(Error::InvalidParam(format!("contour needs >= 16 nodes, got {nodes}")));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidParam(format!("tolerance must be > 0, got {tolerance}")));
        }
        Ok(Self { s0, height, nodes, tolerance })
    }
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { s0: 1.0, height: 400.0, nodes: 20_000, tolerance: Self::DEFAULT_TOLERANCE }
    }
}

/// `int_0^{xf} x^(s-1) f(x) dx` for a function that is smooth on `(0, xf]`
/// and bounded near 0, via `x = xf e^{-y}`. The part below `x = xf e^{-Y}` is
/// replaced by `f(xf e^{-Y}) (xf e^{-Y})^s / s`.
fn mellin_below<F>(xf: f64, s: Complex64, rel_tol: f64, mut f: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let upper = DECAY / s.re;
    let scale = (s * xf.ln()).exp();
    let mut failure = None;
    let mut eval = |y: f64| -> Complex64 {
        match f(xf * (-y).exp()) {
            Ok(v) => v * (-s * y).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let body = integrate_adaptive(&mut eval, 0.0, upper, rel_tol, 0.0)?;
    let tail = eval(upper) / s;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(scale * (body + tail))
}

/// Mellin transform of the regular part at time `t`, by quadrature.
pub fn regular_mellin_quadrature(params: &ProblemParams, t: f64, s: Complex64) -> Result<Complex64> {
    check_s(s)?;
    let xf = front(params, t)?;
    mellin_below(xf, s, FORWARD_REL_TOL, |x| closedform::u_regular(params, t, x.min(xf)))
}

/// Atom contribution plus quadrature of `int x^(s-1) u^R dx` over `(0, front]`.
pub fn forward_mellin(snapshot: &SolutionSnapshot, s: Complex64) -> Result<Complex64> {
    let regular = regular_mellin_quadrature(&snapshot.params, snapshot.t, s)?;
    Ok(snapshot.atom.mellin(s) + regular)
}

/// Jump `J` and inward slope `D` of the regular part at the front, so that
/// `u^R(x) = J + D (front - x) + O((front - x)^2)` just inside it.
fn front_expansion(params: &ProblemParams, t: f64, tau: f64) -> (f64, f64) {
    let g = params.gamma;
    let jump = params.theta * t * tau.powf(2.0 / g);
    let ab = 1.0 + 2.0 / g + params.theta / (g * g);
    let xf = tau.powf(-1.0 / g);
    (jump, jump * 0.5 * ab * g * g * t * tau * xf.powf(g - 1.0))
}

/// Mellin image of `(J + D (front - x)) H(front - x)`.
fn front_mellin(xf: f64, jump: f64, slope: f64, s: Complex64) -> Complex64 {
    let fs = (s * xf.ln()).exp();
    fs * (jump / s + slope * xf / (s * (s + 1.0)))
}

/// Pointwise inverse Mellin transform of the regular part.
///
/// The atom and the first two terms of the regular part's expansion at the
/// front, `J + D (front - x)`, have explicit Mellin images; all three are removed
/// before inversion, so the remaining integrand decays like `|s|^-3`. The front
/// terms are added back in physical space. The contour integral
/// uses the trapezoid rule on `[0, height]` together with conjugate symmetry.
///
/// Returns [`Error::ContourTooShort`] when the fitted tail
/// `C x^-s0 / (pi (1 + height))` exceeds `contour.tolerance`.
pub fn inverse_mellin_regular(params: &ProblemParams, t: f64, x: f64, contour: &ContourSpec) -> Result<f64> {
    let tau = remaining(params, t)?;
    if t <= 0.0 {
        return Err(Error::TimeOutOfRange { t, blowup: params.blowup_time() });
    }
    if !(x > 0.0) {
        return Err(Error::InvalidDomain(format!("x must be > 0, got {x}")));
    }
    let xf = front(params, t)?;
    if (x - xf).abs() < FRONT_EXCLUSION * xf {
        return Err(Error::InvalidDomain(format!("x = {x} is on the front {xf}")));
    }
    let atom = closedform::atom_state(params, t)?;
    let (jump, slope) = front_expansion(params, t, tau);
    let n = contour.nodes;
    let h = contour.height / (n - 1) as f64;
    let log_x = x.ln();
    let samples: Vec<(Complex64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let s = Complex64::new(contour.s0, h * k as f64);
            let rest = omega_euler(params, t, s)? - atom.mellin(s) - front_mellin(xf, jump, slope, s);
            let decay = rest.norm() * (1.0 + s.norm()).powi(2);
            Ok(((-s * log_x).exp() * rest, decay))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut weighted: Vec<Complex64> = samples.iter().map(|v| v.0).collect();
    weighted[0] *= 0.5;
    weighted[n - 1] *= 0.5;
    let integral = pairwise_sum(&weighted) * h;
    let fit_from = n - ((n as f64 * TAIL_FIT_FRACTION).ceil() as usize).max(2);
    let c = samples[fit_from..].iter().map(|v| v.1).fold(0.0, f64::max);
    let tail = c * (-contour.s0 * log_x).exp() / (std::f64::consts::PI * (1.0 + contour.height));
    if tail > contour.tolerance {
        return Err(Error::ContourTooShort { tail, tolerance: contour.tolerance });
    }
    let near_front = if x < xf { jump + slope * (xf - x) } else { 0.0 };
    Ok(near_front + integral.re / std::f64::consts::PI)
}

/// `|(Omega(t+dt, s) - Omega(t-dt, s)) / (2 dt) - Phi(s) Omega(t, s+gamma)|`.
pub fn mellin_ode_residual(params: &ProblemParams, t: f64, s: Complex64, dt: f64) -> Result<f64> {
    check_s(s)?;
    remaining(params, t)?;
    let room = t.min(params.blowup_time() - t);
    if !(dt > 0.0 && dt < 0.5 * room) {
        return Err(Error::InvalidDomain(format!("dt = {dt} must lie in (0, {})", 0.5 * room)));
    }
    let derivative = (omega(params, t + dt, s)? - omega(params, t - dt, s)?) / (2.0 * dt);
    let rhs = params.phi(s)? * omega(params, t, s + params.gamma)?;
    Ok((derivative - rhs).norm())
}

/// `int_0^{front} (1 + (gamma t - 1) x^gamma)^n x^(s-1) dx`
/// `= (1-gamma t)^(-s/gamma) Gamma(n+1) Gamma(s/gamma) / (gamma Gamma(1 + s/gamma + n))`.
pub fn beta_moment_integral(params: &ProblemParams, t: f64, n: u32, s: Complex64) -> Result<Complex64> {
    check_s(s)?;
    let tau = remaining(params, t)?;
    let g = params.gamma;
    let nf = n as f64;
    let ratio = gamma_ratio(&[Complex64::new(nf + 1.0, 0.0), s / g], &[1.0 + s / g + nf])?;
    Ok((-s / g * tau.ln()).exp() * ratio / g)
}

/// The same integral by adaptive quadrature.
pub fn beta_moment_quadrature(params: &ProblemParams, t: f64, n: u32, s: Complex64) -> Result<Complex64> {
    check_s(s)?;
    let tau = remaining(params, t)?;
    let xf = front(params, t)?;
    let g = params.gamma;
    mellin_below(xf, s, 1e-13, |x| Ok((1.0 - tau * x.powf(g)).max(0.0).powi(n as i32)))
}

/// Mellin transform of `v = u^R / (theta t (1-gamma t)^(2/gamma))`,
/// `(1-gamma t)^(-s/gamma) (F(sigma1/gamma, sigma2/gamma; s/gamma; gamma t) - 1) / (theta t)`.
pub fn mellin_of_v(params: &ProblemParams, t: f64, s: Complex64) -> Result<Complex64> {
    mellin_of_v_with(params, t, s, Complex64::new(params.theta, 0.0))
}

/// As [`mellin_of_v`] with `theta` written as the product of the roots.
pub fn mellin_of_v_root_product(params: &ProblemParams, t: f64, s: Complex64) -> Result<Complex64> {
    mellin_of_v_with(params, t, s, params.sigma1 * params.sigma2)
}

fn mellin_of_v_with(params: &ProblemParams, t: f64, s: Complex64, theta: Complex64) -> Result<Complex64> {
    check_s(s)?;
    let tau = remaining(params, t)?;
    if t <= 0.0 {
        return Err(Error::TimeOutOfRange { t, blowup: params.blowup_time() });
    }
    let g = params.gamma;
    let f = hyp2f1(params.sigma1 / g, params.sigma2 / g, s / g, g * t)?;
    Ok((-s / g * tau.ln()).exp() * (f - 1.0) / (theta * t))
}

/// Atom image plus `theta t (1-gamma t)^(2/gamma)` times [`mellin_of_v`];
/// equals `Omega(t, s)`.
pub fn reassembled_omega(params: &ProblemParams, t: f64, s: Complex64) -> Result<Complex64> {
    let tau = remaining(params, t)?;
    let atom = closedform::atom_state(params, t)?.mellin(s);
    let scale = params.theta * t * tau.powf(2.0 / params.gamma);
    Ok(atom + scale * mellin_of_v(params, t, s)?)
}

/// Mellin transform of `v` by quadrature, for cross-checking [`mellin_of_v`].
pub fn mellin_of_v_quadrature(params: &ProblemParams, t: f64, s: Complex64) -> Result<Complex64> {
    let tau = remaining(params, t)?;
    let scale = params.theta * t * tau.powf(2.0 / params.gamma);
    Ok(regular_mellin_quadrature(params, t, s)? / scale)
}

fn check_s(s: Complex64) -> Result<()> {
    if s.re > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("Re s must be > 0, got {s}")))
    }
}
