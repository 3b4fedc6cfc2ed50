//! Direct numerics for the growth-fragmentation equation, independent of the
//! closed form except for initial data: a finite-volume solver for the regular
//! part, RK4 along the atom's characteristic, and a weak-form residual.

use crate::closedform::{self, front, remaining, AtomComponent};
use crate::error::{Error, Result};
use crate::grid::{power_integral, GridFunction, RadialGrid};
use crate::model::ProblemParams;
use crate::quad::GaussRule;

/// `theta int_x^inf f(y) y^(gamma-1) dy` for a piecewise-constant `f`.
///
/// Cells above `x` contribute exactly; the cell containing `x` contributes the
/// part of itself lying above `x`. Zero when `x` is above the grid.
pub fn gain_integral(params: &ProblemParams, f: &GridFunction, x: f64) -> f64 {
    let g = params.gamma;
    let edges = f.grid.edges();
    let n = f.grid.len();
    let first = match f.grid.locate(x.max(edges[0])) {
        Some(i) => i,
        None => return 0.0,
    };
    let mut acc = 0.0;
    for j in (first + 1..n).rev() {
        acc += f.values[j] * power_integral(edges[j], edges[j + 1], g - 1.0);
    }
    let lo = x.max(edges[first]);
    acc += f.values[first] * power_integral(lo, edges[first + 1], g - 1.0);
    params.theta * acc
}

/// Precomputed cell geometry for the upwind scheme.
struct Stencil {
    widths: Vec<f64>,
    /// `edge^(gamma+1)`, the transport speed at each edge.
    speed: Vec<f64>,
    /// Cell average of `x^gamma`.
    loss: Vec<f64>,
    /// `int_cell y^(gamma-1) dy`.
    gain_weight: Vec<f64>,
    /// `int_{center}^{right edge} y^(gamma-1) dy`.
    gain_partial: Vec<f64>,
}

impl Stencil {
    fn new(params: &ProblemParams, grid: &RadialGrid) -> Self {
        let g = params.gamma;
        let e = grid.edges();
        let n = grid.len();
        let widths: Vec<f64> = (0..n).map(|i| grid.width(i)).collect();
        let speed = e.iter().map(|x| x.powf(g + 1.0)).collect();
        let loss = (0..n).map(|i| power_integral(e[i], e[i + 1], g) / widths[i]).collect();
        let gain_weight = (0..n).map(|i| power_integral(e[i], e[i + 1], g - 1.0)).collect();
        let gain_partial = (0..n)
            .map(|i| power_integral(grid.centers()[i], e[i + 1], g - 1.0))
            .collect();
        Self { widths, speed, loss, gain_weight, gain_partial }
    }

    /// Largest stable explicit step for the given Courant number.
    fn max_step(&self, cfl: f64) -> f64 {
        (0..self.widths.len())
            .map(|i| self.widths[i] / (self.speed[i + 1] + self.widths[i] * self.loss[i]))
            .fold(f64::INFINITY, f64::min)
            * cfl
    }
}

/// Evolves the regular part from the closed form at `t0` and returns it at each
/// of `times` (ascending, all `>= t0`).
///
/// The scheme is first-order upwind finite volume with explicit Euler steps of
/// size `cfl * min_i dx_i / (edge_{i+1}^(gamma+1) + dx_i <x^gamma>_i)`; the atom
/// enters as the source `theta (1-gamma t)^((2-gamma)/gamma) H(front - x)`,
/// averaged exactly over each cell.
pub fn solve_regular_at(
    params: &ProblemParams,
    t0: f64,
    times: &[f64],
    grid: &RadialGrid,
    cfl: f64,
) -> Result<Vec<GridFunction>> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::CflViolation(cfl));
    }
    if !(t0 > 0.0) {
        return Err(Error::TimeOutOfRange { t: t0, blowup: params.blowup_time() });
    }
    remaining(params, t0)?;
    let mut last = t0;
    for &t in times {
        remaining(params, t)?;
        if t < last {
            return Err(Error::InvalidParam(format!("output times must be ascending and >= t0, got {t}")));
        }
        last = t;
    }
    let top = front(params, last)?;
    if top >= grid.x_max() {
        return Err(Error::DomainTooSmall { front: top, x_max: grid.x_max() });
    }

    let g = params.gamma;
    let start = front(params, t0)?;
    let init = GridFunction::cell_averages(grid.clone(), &[start], |x| closedform::u_regular(params, t0, x))?;
    let mut u = init.values;
    let n = u.len();
    let st = Stencil::new(params, grid);
    let step = st.max_step(cfl);
    let edges = grid.edges();
    let source_exp = (2.0 - g) / g;

    let mut flux = vec![0.0; n + 1];
    let mut gain = vec![0.0; n];
    let mut out = Vec::with_capacity(times.len());
    let mut t = t0;
    for &target in times {
        while target - t > 1e-14 * target.max(1.0) {
            let dt = step.min(target - t);
            let tau = 1.0 - g * t;
            let xf = tau.powf(-1.0 / g);
            let source = params.theta * tau.powf(source_exp);

            // zero-gradient inflow at x_min, free outflow at x_max
            flux[0] = st.speed[0] * u[0];
            for i in 0..n {
                flux[i + 1] = st.speed[i + 1] * u[i];
            }
            let mut above = 0.0;
            for i in (0..n).rev() {
                gain[i] = params.theta * (above + u[i] * st.gain_partial[i]);
                above += u[i] * st.gain_weight[i];
            }
            for i in 0..n {
                let covered = ((xf - edges[i]) / st.widths[i]).clamp(0.0, 1.0);
                let rhs = -(flux[i + 1] - flux[i]) / st.widths[i] - st.loss[i] * u[i]
                    + source * covered
                    + gain[i];
                u[i] += dt * rhs;
            }
            t += dt;
        }
        out.push(GridFunction::new(grid.clone(), u.clone())?);
    }
    Ok(out)
}

/// `solve_regular_at` for a single final time.
pub fn solve_regular(params: &ProblemParams, t0: f64, t1: f64, grid: &RadialGrid, cfl: f64) -> Result<GridFunction> {
    if t1 < t0 {
        return Err(Error::InvalidParam(format!("t1 = {t1} precedes t0 = {t0}")));
    }
    Ok(solve_regular_at(params, t0, &[t1], grid, cfl)?.remove(0))
}

/// Right edge of the last cell whose value is at least `threshold`.
pub fn support_edge(f: &GridFunction, threshold: f64) -> Option<f64> {
    f.values.iter().rposition(|&v| v >= threshold).map(|i| f.grid.edges()[i + 1])
}

/// RK4 for the atom's characteristic `X' = X^(1+gamma)`, `m' = -X^gamma m`
/// from `(1, 1)` at `t = 0`, with step `1e-4 / gamma`.
pub fn atom_ode_check(params: &ProblemParams, t1: f64) -> Result<AtomComponent> {
    remaining(params, t1)?;
    let g = params.gamma;
    let rhs = |y: [f64; 2]| [y[0].powf(1.0 + g), -y[0].powf(g) * y[1]];
    let base = 1e-4 / g;
    let steps = (t1 / base).ceil() as usize;
    let mut y = [1.0, 1.0];
    let mut t = 0.0;
    for k in 0..steps {
        let h = if k + 1 == steps { t1 - t } else { base };
        let k1 = rhs(y);
        let k2 = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for d in 0..2 {
            y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
        t += h;
    }
    Ok(AtomComponent { location: y[0], mass: y[1] })
}

/// `exp(1 - 1/(1 - q^2))` with `q = (x - center) / half_width`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
}

impl Bump {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && center.is_finite() && half_width.is_finite()) {
            return Err(Error::InvalidParam(format!("bad bump ({center}, {half_width})")));
        }
        Ok(Self { center, half_width })
    }

    pub fn left(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn right(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn value(&self, x: f64) -> f64 {
        let q = (x - self.center) / self.half_width;
        if q.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - q * q)).exp()
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let q = (x - self.center) / self.half_width;
        if q.abs() >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - q * q;
        self.value(x) * (-2.0 * q / (d * d)) / self.half_width
    }
}

/// Separable test function `phi(t, x) = T(t) X(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakTestFunction {
    pub time_bump: Bump,
    pub space_bump: Bump,
}

impl WeakTestFunction {
    pub fn new(time_bump: Bump, space_bump: Bump) -> Result<Self> {
        if space_bump.left() <= 0.0 {
            return Err(Error::InvalidParam("space bump must be supported in (0, inf)".into()));
        }
        Ok(Self { time_bump, space_bump })
    }

    fn check_time_support(&self, params: &ProblemParams) -> Result<()> {
        if self.time_bump.left() <= 0.0 || self.time_bump.right() >= params.blowup_time() {
            return Err(Error::InvalidParam(format!(
                "time bump [{}, {}] must lie inside (0, {})",
                self.time_bump.left(),
                self.time_bump.right(),
                params.blowup_time()
            )));
        }
        Ok(())
    }
}

/// A candidate measure-valued solution `atom(t) + regular(t, x) dx`.
pub trait WeakSolution {
    /// The Dirac part at time `t`, if any.
    fn atom(&self, t: f64) -> Result<Option<AtomComponent>>;
    /// Density of the absolutely continuous part.
    fn regular(&self, t: f64, x: f64) -> Result<f64>;
    /// A point above which the regular part vanishes; the density may jump there.
    fn support_top(&self, t: f64) -> Result<f64>;
}

/// The closed-form solution.
#[derive(Debug, Clone, Copy)]
pub struct ExactSolution {
    pub params: ProblemParams,
}

impl WeakSolution for ExactSolution {
    fn atom(&self, t: f64) -> Result<Option<AtomComponent>> {
        Ok(Some(closedform::atom_state(&self.params, t)?))
    }

    fn regular(&self, t: f64, x: f64) -> Result<f64> {
        closedform::u_regular(&self.params, t, x)
    }

    fn support_top(&self, t: f64) -> Result<f64> {
        front(&self.params, t)
    }
}

/// `u = 0`, for which every weak residual vanishes identically.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroSolution;

impl WeakSolution for ZeroSolution {
    fn atom(&self, _t: f64) -> Result<Option<AtomComponent>> {
        Ok(None)
    }

    fn regular(&self, _t: f64, _x: f64) -> Result<f64> {
        Ok(0.0)
    }

    fn support_top(&self, _t: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Weak residual of the closed-form solution against `phi`.
pub fn weak_residual(params: &ProblemParams, phi: &WeakTestFunction, quad_nodes: usize) -> Result<f64> {
    weak_residual_of(params, &ExactSolution { params: *params }, phi, quad_nodes)
}

/// `|int int u psi dx dt|` with
/// `psi = -d_t phi - x^(gamma+1) d_x phi + x^gamma phi - theta x^(gamma-1) int_0^x phi`,
/// the integrated-by-parts form of the equation. The atom contributes
/// `mass * psi(t, location)`; the density is integrated by Gauss-Legendre with
/// `quad_nodes` points per axis and per smooth piece.
pub fn weak_residual_of<S: WeakSolution>(
    params: &ProblemParams,
    solution: &S,
    phi: &WeakTestFunction,
    quad_nodes: usize,
) -> Result<f64> {
    if quad_nodes < 64 {
        return Err(Error::InvalidParam(format!("need >= 64 quadrature nodes, got {quad_nodes}")));
    }
    phi.check_time_support(params)?;
    let g = params.gamma;
    let rule = GaussRule::new(quad_nodes);
    let xb = phi.space_bump;
    let full_mass = rule.integrate(xb.left(), xb.right(), |y| xb.value(y));
    let antiderivative = |x: f64| -> f64 {
        if x <= xb.left() {
            0.0
        } else if x >= xb.right() {
            full_mass
        } else {
            rule.integrate(xb.left(), x, |y| xb.value(y))
        }
    };
    // psi(t, x) given T(t), T'(t)
    let psi = |tv: f64, dtv: f64, x: f64| -> f64 {
        -dtv * xb.value(x) - tv * x.powf(g + 1.0) * xb.derivative(x) + tv * x.powf(g) * xb.value(x)
            - params.theta * x.powf(g - 1.0) * tv * antiderivative(x)
    };

    let tb = phi.time_bump;
    let mut total = 0.0;
    for (t, wt) in rule.mapped(tb.left(), tb.right()) {
        let (tv, dtv) = (tb.value(t), tb.derivative(t));
        if tv == 0.0 && dtv == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        if let Some(atom) = solution.atom(t)? {
            inner += atom.mass * psi(tv, dtv, atom.location);
        }
        // psi vanishes below the bump; the density is smooth below its support top
        let top = solution.support_top(t)?;
        let mut cuts = vec![xb.left()];
        if xb.right() < top {
            cuts.push(xb.right());
        }
        cuts.push(top);
        for w in cuts.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            for (x, wx) in rule.mapped(w[0], w[1]) {
                inner += wx * solution.regular(t, x)? * psi(tv, dtv, x);
            }
        }
        total += wt * inner;
    }
    Ok(total.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Spacing;
    use crate::quad::integrate_adaptive;
    use num_complex::Complex64;

    fn p(g: f64, th: f64) -> ProblemParams {
        ProblemParams::new(g, th).unwrap()
    }

    #[test]
    fn gain_of_zero_and_indicator() {
        let q = p(1.0, 2.0);
        let grid = RadialGrid::new(0.0, 4.0, 8, Spacing::Uniform).unwrap();
        assert_eq!(gain_integral(&q, &GridFunction::zeros(grid.clone()), 0.5), 0.0);
        let values = grid.centers().iter().map(|&x| if (1.0..2.0).contains(&x) { 1.0 } else { 0.0 }).collect();
        let f = GridFunction::new(grid, values).unwrap();
        assert!((gain_integral(&q, &f, 0.5) - 2.0).abs() < 1e-15);
        assert_eq!(gain_integral(&q, &f, 5.0), 0.0);
    }

    #[test]
    fn gain_of_closed_form_matches_quadrature() {
        let q = p(1.0, 2.0);
        let t = 0.5;
        let xf = front(&q, t).unwrap();
        let grid = RadialGrid::new(1e-3, 10.0, 40_000, Spacing::LogUniform).unwrap();
        let f = GridFunction::cell_averages(grid, &[xf], |x| closedform::u_regular(&q, t, x)).unwrap();
        for x in [0.3, 1.0, 1.7] {
            let exact = integrate_adaptive(
                |y| Complex64::new(q.theta * closedform::u_regular(&q, t, y).unwrap(), 0.0),
                x,
                xf,
                1e-12,
                0.0,
            )
            .unwrap();
            let got = gain_integral(&q, &f, x);
            assert!((got - exact.re).abs() < 1e-6, "x={x}: {got} vs {}", exact.re);
        }
    }

    #[test]
    fn zero_length_run_returns_initial_data() {
        let q = p(1.0, 2.0);
        let grid = RadialGrid::new(1e-3, 4.0, 200, Spacing::LogUniform).unwrap();
        let got = solve_regular(&q, 0.3, 0.3, &grid, 0.9).unwrap();
        let init = GridFunction::cell_averages(grid, &[front(&q, 0.3).unwrap()], |x| {
            closedform::u_regular(&q, 0.3, x)
        })
        .unwrap();
        assert_eq!(got, init);
    }

    #[test]
    fn solver_errors() {
        let q = p(1.0, 2.0);
        let grid = RadialGrid::new(1e-3, 1.5, 100, Spacing::LogUniform).unwrap();
        assert!(matches!(solve_regular(&q, 0.2, 0.5, &grid, 0.9), Err(Error::DomainTooSmall { .. })));
        assert!(matches!(solve_regular(&q, 0.1, 0.2, &grid, 1.5), Err(Error::CflViolation(_))));
        assert!(matches!(solve_regular(&q, 0.1, 0.2, &grid, 0.0), Err(Error::CflViolation(_))));
        assert!(solve_regular(&q, 0.1, 1.2, &grid, 0.5).is_err());
    }

    #[test]
    fn coarse_run_stays_close_and_positive() {
        let q = p(1.0, 2.0);
        let grid = RadialGrid::new(1e-3, 10.0, 1000, Spacing::LogUniform).unwrap();
        let u = solve_regular(&q, 0.2, 0.5, &grid, 0.9).unwrap();
        assert!(u.min_value() >= -1e-12);
        let exact = GridFunction::cell_averages(grid, &[2.0], |x| closedform::u_regular(&q, 0.5, x)).unwrap();
        let rel = u.l1_distance(&exact) / exact.l1_norm();
        assert!(rel < 0.05, "{rel}");
    }

    #[test]
    fn atom_characteristic() {
        let q = p(1.0, 2.0);
        assert_eq!(atom_ode_check(&q, 0.0).unwrap(), AtomComponent { location: 1.0, mass: 1.0 });
        let a = atom_ode_check(&q, 0.5).unwrap();
        assert!((a.location - 2.0).abs() < 1e-8 * 2.0);
        assert!((a.mass - 0.5).abs() < 1e-8 * 0.5);
        assert!((a.mass * a.location - 1.0).abs() < 1e-8);
        assert!(atom_ode_check(&q, 1.0).is_err());
    }

    #[test]
    fn bump_derivative() {
        let b = Bump::new(1.2, 0.3).unwrap();
        for x in [0.95, 1.1, 1.3, 1.45] {
            let h = 1e-6;
            let fd = (b.value(x + h) - b.value(x - h)) / (2.0 * h);
            assert!((fd - b.derivative(x)).abs() < 1e-7);
        }
        assert_eq!(b.value(0.9), 0.0);
        assert_eq!(b.value(1.2), 1.0);
    }

    #[test]
    fn weak_residual_sanity() {
        let q = p(1.0, 2.0);
        let phi = WeakTestFunction::new(Bump::new(0.4, 0.1).unwrap(), Bump::new(1.2, 0.3).unwrap()).unwrap();
        assert_eq!(weak_residual_of(&q, &ZeroSolution, &phi, 64).unwrap(), 0.0);
        // test function above everything the solution reaches
        let far = WeakTestFunction::new(Bump::new(0.4, 0.1).unwrap(), Bump::new(5.0, 0.5).unwrap()).unwrap();
        assert!(weak_residual(&q, &far, 64).unwrap() <= 1e-10);
        assert!(weak_residual(&q, &phi, 32).is_err());
        let late = WeakTestFunction::new(Bump::new(0.95, 0.1).unwrap(), Bump::new(1.2, 0.3).unwrap()).unwrap();
        assert!(weak_residual(&q, &late, 64).is_err());
    }

    #[test]
    fn weak_residual_of_exact_solution() {
        let q = p(1.0, 2.0);
        let phi = WeakTestFunction::new(Bump::new(0.4, 0.1).unwrap(), Bump::new(1.2, 0.3).unwrap()).unwrap();
        assert!(weak_residual(&q, &phi, 256).unwrap() <= 1e-5);
    }
}
