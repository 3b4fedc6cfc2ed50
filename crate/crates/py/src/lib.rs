//! Python bindings: problem parameters, the closed-form solution, Mellin
//! inversion and the finite-volume solver.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use growfrag::checks::{self, Tolerances};
use growfrag::closedform;
use growfrag::mellin::{self, ContourSpec};
use growfrag::{pdesolver, RadialGrid, Spacing};

create_exception!(pygrowfrag, GrowfragError, PyException);

fn err(e: growfrag::Error) -> PyErr {
    GrowfragError::new_err(e.to_string())
}

/// Growth exponent `gamma` and kernel height `theta`.
#[pyclass(name = "Params", frozen, from_py_object)]
#[derive(Clone)]
struct Params {
    inner: growfrag::ProblemParams,
}

#[pymethods]
impl Params {
    #[new]
    fn new(gamma: f64, theta: f64) -> PyResult<Self> {
        Ok(Self { inner: growfrag::make_params(gamma, theta).map_err(err)? })
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta
    }

    #[getter]
    fn sigma1(&self) -> Complex64 {
        self.inner.sigma1
    }

    #[getter]
    fn sigma2(&self) -> Complex64 {
        self.inner.sigma2
    }

    #[getter]
    fn blowup_time(&self) -> f64 {
        self.inner.blowup_time()
    }

    fn phi(&self, s: Complex64) -> PyResult<Complex64> {
        self.inner.phi(s).map_err(err)
    }

    /// `(value, argmin, global_existence_condition)` of `Phi` on `s > 0`.
    fn phi_infimum(&self) -> (f64, f64, bool) {
        let m = self.inner.phi_infimum();
        (m.value, m.argmin, m.global_existence_condition)
    }

    fn __repr__(&self) -> String {
        format!("Params(gamma={}, theta={})", self.inner.gamma, self.inner.theta)
    }
}

/// `(location, mass)` of the Dirac component at time `t`.
#[pyfunction]
fn atom_state(p: &Params, t: f64) -> PyResult<(f64, f64)> {
    let a = closedform::atom_state(&p.inner, t).map_err(err)?;
    Ok((a.location, a.mass))
}

#[pyfunction]
fn front(p: &Params, t: f64) -> PyResult<f64> {
    closedform::front(&p.inner, t).map_err(err)
}

#[pyfunction]
fn front_jump(p: &Params, t: f64) -> PyResult<f64> {
    closedform::front_jump(&p.inner, t).map_err(err)
}

/// Regular density at each `x`.
#[pyfunction]
fn u_regular(p: &Params, t: f64, x: Vec<f64>) -> PyResult<Vec<f64>> {
    x.iter().map(|&x| closedform::u_regular(&p.inner, t, x).map_err(err)).collect()
}

/// Mellin transform of the full solution at `s`.
#[pyfunction]
fn omega(p: &Params, t: f64, s: Complex64) -> PyResult<Complex64> {
    closedform::omega(&p.inner, t, s).map_err(err)
}

#[pyfunction]
fn moment(p: &Params, t: f64, r: f64) -> PyResult<f64> {
    closedform::moment(&p.inner, t, r).map_err(err)
}

#[pyfunction]
fn scaled_moment(p: &Params, t: f64, r: f64) -> PyResult<f64> {
    closedform::scaled_moment(&p.inner, t, r).map_err(err)
}

#[pyfunction]
fn blowup_constant(p: &Params, r: f64) -> PyResult<f64> {
    closedform::blowup_constant(&p.inner, r).map_err(err)
}

#[pyfunction]
fn profile_limit(p: &Params, x: Vec<f64>) -> PyResult<Vec<f64>> {
    x.iter().map(|&x| closedform::profile_limit(&p.inner, x).map_err(err)).collect()
}

/// Regular density recovered from `Omega` along `Re s = s0`.
#[pyfunction]
#[pyo3(signature = (p, t, x, s0=0.5, height=400.0, nodes=20000, tolerance=ContourSpec::DEFAULT_TOLERANCE))]
fn inverse_mellin(p: &Params, t: f64, x: f64, s0: f64, height: f64, nodes: usize, tolerance: f64) -> PyResult<f64> {
    let contour = ContourSpec::with_tolerance(s0, height, nodes, tolerance).map_err(err)?;
    mellin::inverse_mellin_regular(&p.inner, t, x, &contour).map_err(err)
}

/// Advances the regular part from `t0` to `t1`; returns `(centers, values)`.
#[pyfunction]
#[pyo3(signature = (p, t0, t1, x_min=1e-3, x_max=10.0, cells=4000, cfl=0.9, spacing="log"))]
#[allow(clippy::too_many_arguments)]
fn solve_regular(
    py: Python<'_>,
    p: &Params,
    t0: f64,
    t1: f64,
    x_min: f64,
    x_max: f64,
    cells: usize,
    cfl: f64,
    spacing: &str,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let spacing: Spacing = spacing.parse().map_err(err)?;
    let grid = RadialGrid::new(x_min, x_max, cells, spacing).map_err(err)?;
    let params = p.inner;
    let u = py.detach(|| pdesolver::solve_regular(&params, t0, t1, &grid, cfl)).map_err(err)?;
    Ok((u.grid.centers().to_vec(), u.values))
}

/// Weak-form residuals of the closed form for the default test functions.
#[pyfunction]
#[pyo3(signature = (p, nodes=256))]
fn weak_residuals(p: &Params, nodes: usize) -> PyResult<Vec<f64>> {
    checks::default_bumps(&p.inner)
        .map_err(err)?
        .iter()
        .map(|phi| pdesolver::weak_residual(&p.inner, phi, nodes).map_err(err))
        .collect()
}

/// Runs the Mellin verification suite; returns `(name, value, tolerance, passed)` rows.
#[pyfunction]
#[pyo3(signature = (p, t, s0=0.5, height=400.0, nodes=20000))]
fn verify_mellin(p: &Params, t: f64, s0: f64, height: f64, nodes: usize) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let contour = ContourSpec::new(s0, height, nodes).map_err(err)?;
    let rows = checks::mellin_suite(&p.inner, t, &contour, &Tolerances::default()).map_err(err)?;
    Ok(rows.into_iter().map(|c| (c.name.clone(), c.value, c.tolerance, c.passed())).collect())
}

#[pymodule]
fn pygrowfrag(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GrowfragError", m.py().get_type::<GrowfragError>())?;
    m.add_class::<Params>()?;
    m.add_function(wrap_pyfunction!(atom_state, m)?)?;
    m.add_function(wrap_pyfunction!(front, m)?)?;
    m.add_function(wrap_pyfunction!(front_jump, m)?)?;
    m.add_function(wrap_pyfunction!(u_regular, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_moment, m)?)?;
    m.add_function(wrap_pyfunction!(blowup_constant, m)?)?;
    m.add_function(wrap_pyfunction!(profile_limit, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_mellin, m)?)?;
    m.add_function(wrap_pyfunction!(solve_regular, m)?)?;
    m.add_function(wrap_pyfunction!(weak_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mellin, m)?)?;
    Ok(())
}
