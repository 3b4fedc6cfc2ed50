//! Problem parameters, the constant dislocation kernel and the symbol `Phi(s)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Growth exponent `gamma`, kernel height `theta` and the two roots of `Phi`.
///
/// `sigma1 = 1 - sqrt(1 - theta)` and `sigma2 = 1 + sqrt(1 - theta)`; for
/// `theta > 1` they are complex conjugates with `Im sigma1 < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub gamma: f64,
    pub theta: f64,
    pub sigma1: Complex64,
    pub sigma2: Complex64,
}

/// Result of minimising `Phi` over the positive real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiInfimum {
    pub value: f64,
    pub argmin: f64,
    /// `inf Phi < 0`, the hypothesis under which global solutions are known to exist.
    pub global_existence_condition: bool,
}

const GOLDEN_TOL: f64 = 1e-10;
const SCAN_POINTS: usize = 1000;
const SCAN_MIN: f64 = 1e-3;

impl ProblemParams {
    pub fn new(gamma: f64, theta: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParam(format!("gamma must be > 0, got {gamma}")));
        }
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::InvalidParam(format!("theta must be > 0, got {theta}")));
        }
        if (theta - 1.0).abs() < 1e-12 {
            return Err(Error::InvalidParam("theta = 1 gives a double root of Phi".into()));
        }
        let root = Complex64::new(1.0 - theta, 0.0).sqrt();
        let (sigma1, sigma2) = if theta > 1.0 {
            let r = (theta - 1.0).sqrt();
            (Complex64::new(1.0, -r), Complex64::new(1.0, r))
        } else {
            (1.0 - root, 1.0 + root)
        };
        Ok(Self { gamma, theta, sigma1, sigma2 })
    }

    /// Blow-up time `1 / gamma`.
    pub fn blowup_time(&self) -> f64 {
        1.0 / self.gamma
    }

    /// `theta H(1 - x)`, with the value at `x = 1` taken as 0.
    pub fn kernel_k0(&self, x: f64) -> f64 {
        if x > 0.0 && x < 1.0 {
            self.theta
        } else {
            0.0
        }
    }

    /// Mellin transform of the kernel, `K(s) = theta / s`.
    pub fn capital_k(&self, s: Complex64) -> Result<Complex64> {
        check_right_half_plane(s)?;
        Ok(self.theta / s)
    }

    /// `Phi(s) = K(s) + s - 2`.
    pub fn phi(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.capital_k(s)? + s - 2.0)
    }

    /// Factored form `(s - sigma1)(s - sigma2) / s`.
    pub fn phi_factored(&self, s: Complex64) -> Result<Complex64> {
        check_right_half_plane(s)?;
        Ok((s - self.sigma1) * (s - self.sigma2) / s)
    }

    /// `int_{1/2}^{1} (1 - x)^2 k0(x) dx = theta / 24`.
    pub fn kernel_second_moment(&self) -> f64 {
        self.theta / 24.0
    }

    /// Minimum of `Phi` over `s > 0`: a grid scan on `(1e-3, 10 sqrt(theta)]`
    /// followed by golden-section refinement.
    pub fn phi_infimum(&self) -> PhiInfimum {
        let phi = |s: f64| self.theta / s + s - 2.0;
        let upper = 10.0 * self.theta.sqrt();
        let step = (upper - SCAN_MIN) / (SCAN_POINTS - 1) as f64;
        let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| SCAN_MIN + step * i as f64).collect();
        let best = grid
            .iter()
            .enumerate()
            .min_by(|a, b| phi(*a.1).total_cmp(&phi(*b.1)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(SCAN_POINTS - 1)];
        let argmin = golden_section(phi, lo, hi);
        let value = phi(argmin);
        PhiInfimum { value, argmin, global_existence_condition: value < 0.0 }
    }

    /// `inf_{s>0} Phi(s)`, which equals `2(sqrt(theta) - 1) > 0` when `theta > 1`.
    pub fn inf_phi_positive(&self) -> Result<f64> {
        if self.theta <= 1.0 {
            return Err(Error::InvalidParam(format!(
                "theta = {} <= 1: the infimum of Phi is not positive",
                self.theta
            )));
        }
        Ok(self.phi_infimum().value)
    }
}

/// Same as [`ProblemParams::new`].
pub fn make_params(gamma: f64, theta: f64) -> Result<ProblemParams> {
    ProblemParams::new(gamma, theta)
}

fn check_right_half_plane(s: Complex64) -> Result<()> {
    if s.re > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("Re s must be > 0, got {s}")))
    }
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
