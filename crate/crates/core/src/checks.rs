//! Verification suites run by the `verify-*` subcommands. Each check reports a
//! non-negative discrepancy that passes when it does not exceed its tolerance.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::closedform::{self, atom_state, front, front_jump, omega, omega_euler, u_regular, SolutionSnapshot};
use crate::error::Result;
use crate::grid::{GridFunction, RadialGrid, Spacing};
use crate::mellin::{self, ContourSpec};
use crate::model::ProblemParams;
use crate::pdesolver::{self, Bump, WeakTestFunction, ZeroSolution};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }

    /// `PASS <check> <value> <tol>` or `FAIL <check> <value> <tol>`.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("{status} {} {:e} {:e}", self.name, self.value, self.tolerance)
    }
}

/// Named tolerance overrides on top of each suite's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tolerances(pub BTreeMap<String, f64>);

impl Tolerances {
    fn check(&self, name: &str, value: f64, default: f64) -> Check {
        let tolerance = self.0.get(name).copied().unwrap_or(default);
        // NaN never passes
        let value = if value.is_nan() { f64::INFINITY } else { value };
        Check { name: name.to_string(), value, tolerance }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

const S_GRID: [Complex64; 5] = [
    Complex64::new(0.5, 0.0),
    Complex64::new(1.0, 0.0),
    Complex64::new(2.0, 0.0),
    Complex64::new(3.7, 0.0),
    Complex64::new(1.0, 2.0),
];
const T_FRACTIONS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Mellin-side identities at time `t` (and on the fixed `(t, s)` grid).
pub fn mellin_suite(params: &ProblemParams, t: f64, contour: &ContourSpec, tol: &Tolerances) -> Result<Vec<Check>> {
    let g = params.gamma;
    let mut out = Vec::new();

    let mut forms = 0.0f64;
    let mut reassembly = 0.0f64;
    for frac in T_FRACTIONS {
        for s in S_GRID {
            let tt = frac / g;
            let exact = omega(params, tt, s)?;
            forms = forms.max(rel(omega_euler(params, tt, s)?, exact));
            reassembly = reassembly.max(rel(mellin::reassembled_omega(params, tt, s)?, exact));
        }
    }
    out.push(tol.check("omega_forms", forms, 1e-10));

    let mut roots = 0.0f64;
    for frac in [0.0, 0.25, 0.5, 0.75, 0.9, 0.99] {
        for s in [params.sigma1, params.sigma2] {
            roots = roots.max((omega(params, frac / g, s)? - 1.0).norm());
        }
    }
    let start = S_GRID.iter().map(|&s| omega(params, 0.0, s).map(|v| (v - 1.0).norm()));
    let start = start.collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    out.push(tol.check("omega_roots", roots.max(start), 1e-10));

    let s2 = c(2.0, 0.0);
    let r = [1e-3, 5e-4, 2.5e-4]
        .iter()
        .map(|&dt| mellin::mellin_ode_residual(params, t, s2, dt))
        .collect::<Result<Vec<_>>>()?;
    let order = r.windows(2).map(|w| (w[0] / w[1] - 4.0).abs()).fold(0.0, f64::max);
    out.push(tol.check("ode_residual", mellin::mellin_ode_residual(params, t, s2, 1e-4)?, 1e-6));
    out.push(tol.check("ode_order", order, 0.8));

    let mut beta = 0.0f64;
    for n in [0u32, 1, 3, 6] {
        for s in [c(1.0, 0.0), c(1.5, 0.5), c(3.0, -1.0)] {
            let a = mellin::beta_moment_integral(params, t, n, s)?;
            let b = mellin::beta_moment_quadrature(params, t, n, s)?;
            beta = beta.max((a - b).norm());
        }
    }
    out.push(tol.check("beta_quadrature", beta, 1e-9));
    out.push(tol.check("reassembly", reassembly, 1e-10));

    let xf = front(params, t)?;
    let grid = RadialGrid::new(1e-3, 1.2 * xf, 64, Spacing::LogUniform)?;
    let snap = SolutionSnapshot::new(params, t, grid)?;
    let mut fwd = 0.0f64;
    for s in [c(0.7, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.3, 0.0), c(2.0, 1.0)] {
        fwd = fwd.max(rel(mellin::forward_mellin(&snap, s)?, omega(params, t, s)?));
    }
    out.push(tol.check("forward_mellin", fwd, 1e-6));

    let second = ContourSpec { s0: contour.s0 + 1.5, ..*contour };
    let mut inv = 0.0f64;
    let mut spread = 0.0f64;
    for x in [0.5, 1.0, 2.0] {
        if (x - xf).abs() < 1e-6 * xf {
            continue;
        }
        let exact = u_regular(params, t, x)?;
        let a = mellin::inverse_mellin_regular(params, t, x, contour)?;
        let b = mellin::inverse_mellin_regular(params, t, x, &second)?;
        inv = inv.max((a - exact).abs()).max((b - exact).abs());
        spread = spread.max((a - b).abs());
    }
    out.push(tol.check("inverse_mellin", inv, 1e-4));
    out.push(tol.check("contour_independence", spread, 2e-4));
    Ok(out)
}

/// Options for [`pde_suite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeSetup {
    pub t0: f64,
    pub t1: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
    pub cfl: f64,
}

fn relative_l1(params: &ProblemParams, setup: &PdeSetup, cells: usize) -> Result<(f64, GridFunction)> {
    let grid = RadialGrid::new(setup.x_min, setup.x_max, cells, Spacing::LogUniform)?;
    let u = pdesolver::solve_regular(params, setup.t0, setup.t1, &grid, setup.cfl)?;
    let xf = front(params, setup.t1)?;
    let exact = GridFunction::cell_averages(grid, &[xf], |x| u_regular(params, setup.t1, x))?;
    Ok((u.l1_distance(&exact) / exact.l1_norm(), u))
}

/// Finite-volume run against the closed form, plus the atom characteristic.
pub fn pde_suite(params: &ProblemParams, setup: &PdeSetup, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (e4, u) = relative_l1(params, setup, setup.cells)?;
    let (e2, _) = relative_l1(params, setup, setup.cells / 2)?;
    let (e1, _) = relative_l1(params, setup, setup.cells / 4)?;
    out.push(tol.check("l1_error", e4, 0.03));
    let orders = [(e1 / e2).log2(), (e2 / e4).log2()];
    let worst = orders.iter().map(|o| (o - 1.0).abs()).fold(0.0, f64::max);
    out.push(tol.check("convergence_order", worst, 0.2));
    out.push(tol.check("positivity", (-u.min_value()).max(0.0), 1e-12));

    let edge = pdesolver::support_edge(&u, 0.5 * front_jump(params, setup.t1)?).unwrap_or(setup.x_min);
    let grid = &u.grid;
    let xf = front(params, setup.t1)?;
    let cell_of = |x: f64| grid.locate(x).map(|i| i as f64).unwrap_or(f64::INFINITY);
    let offset = (cell_of(edge * (1.0 - 1e-12)) - cell_of(xf)).abs();
    out.push(tol.check("support_tracking", offset, 3.0));

    let num = pdesolver::atom_ode_check(params, setup.t1)?;
    let exact = atom_state(params, setup.t1)?;
    let atom_err = (num.location / exact.location - 1.0).abs().max((num.mass / exact.mass - 1.0).abs());
    out.push(tol.check("atom_ode", atom_err, 1e-8));
    Ok(out)
}

/// The three bump test functions used by [`weak_suite`], scaled to `1/gamma`.
pub fn default_bumps(params: &ProblemParams) -> Result<Vec<WeakTestFunction>> {
    let tb = params.blowup_time();
    [(0.4, 0.12, 1.2, 0.3), (0.24, 0.16, 0.6, 0.4), (0.6, 0.08, 1.8, 0.5)]
        .iter()
        .map(|&(tc, tw, xc, xw)| WeakTestFunction::new(Bump::new(tc * tb, tw * tb)?, Bump::new(xc, xw)?))
        .collect()
}

/// Weak-form residual of the closed form against smooth bumps.
pub fn weak_suite(params: &ProblemParams, nodes: usize, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    // below this the residual is rounding noise and refinement cannot lower it
    const FLOOR: f64 = 1e-13;
    for (k, phi) in default_bumps(params)?.iter().enumerate() {
        let fine = pdesolver::weak_residual(params, phi, nodes)?;
        let coarse = pdesolver::weak_residual(params, phi, (nodes / 2).max(64))?;
        let coarsest = pdesolver::weak_residual(params, phi, (nodes / 4).max(64))?;
        out.push(tol.check(&format!("weak_residual_{}", k + 1), fine, 1e-5));
        let growth = (fine / coarse.max(FLOOR)).max(coarse / coarsest.max(FLOOR));
        out.push(tol.check(&format!("weak_refinement_{}", k + 1), growth, 1.0));
    }
    let zero = pdesolver::weak_residual_of(params, &ZeroSolution, &default_bumps(params)?[0], 64)?;
    out.push(tol.check("weak_zero_solution", zero, 0.0));
    Ok(out)
}

/// Moment convergence towards the blow-up constants along `gamma t = 1 - 10^-k`.
pub fn blowup_errors(params: &ProblemParams, r: f64, ks: &[i32]) -> Result<Vec<f64>> {
    let bc = closedform::blowup_constant(params, r)?;
    ks.iter()
        .map(|&k| {
            let t = (1.0 - 10f64.powi(-k)) / params.gamma;
            Ok((closedform::scaled_moment(params, t, r)? / bc - 1.0).abs())
        })
        .collect()
}
