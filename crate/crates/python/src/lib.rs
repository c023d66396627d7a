//! Python bindings. Points cross the boundary as `(x, y)` tuples.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use polyvortex_core as core;
use polyvortex_core::corotating::CorotatingPoint;
use polyvortex_core::nested::{self, Alignment, CountPrediction};
use polyvortex_core::polygon::{self, CirculantKind, MotionCase};
use polyvortex_core::{EquilibriumReport, PlanePoint};

type Pair = (f64, f64);

fn pt(p: Pair) -> PlanePoint {
    PlanePoint::new(p.0, p.1)
}

fn pair(p: PlanePoint) -> Pair {
    (p.re, p.im)
}

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::InvalidSystem(_) | core::Error::InvalidParameter(_) | core::Error::CloseVortices { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(frozen, skip_from_py_object, module = "polyvortex")]
#[derive(Clone)]
struct VortexSystem {
    inner: core::VortexSystem,
}

#[pymethods]
impl VortexSystem {
    #[new]
    fn new(positions: Vec<Pair>, vorticities: Vec<f64>) -> PyResult<Self> {
        let inner = core::VortexSystem::new(positions.into_iter().map(pt).collect(), vorticities).map_err(err)?;
        Ok(VortexSystem { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = core::VortexSystem::from_json(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(VortexSystem { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn positions(&self) -> Vec<Pair> {
        self.inner.positions().iter().copied().map(pair).collect()
    }

    #[getter]
    fn vorticities(&self) -> Vec<f64> {
        self.inner.vorticities().to_vec()
    }

    fn velocities(&self) -> Vec<Pair> {
        core::velocities(&self.inner).into_iter().map(pair).collect()
    }

    #[pyo3(signature = (tol = core::dynamics::DEFAULT_CLASSIFY_TOL))]
    fn classify(&self, tol: f64) -> Report {
        Report { inner: core::classify(&self.inner, tol) }
    }

    fn conserved<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = core::conserved(&self.inner);
        let d = PyDict::new(py);
        d.set_item("total_vorticity", c.total_vorticity)?;
        d.set_item("center_of_vorticity", c.center_of_vorticity.map(pair))?;
        d.set_item("hamiltonian", c.hamiltonian)?;
        d.set_item("angular_impulse", c.angular_impulse)?;
        Ok(d)
    }

    fn oneil_sum(&self) -> f64 {
        core::oneil_sum(&self.inner)
    }

    /// Integrate to `t_end`; returns the accepted times and states.
    #[pyo3(signature = (t_end, rel_tol = 1e-10))]
    fn integrate(&self, py: Python<'_>, t_end: f64, rel_tol: f64) -> PyResult<Trajectory> {
        let s = self.inner.clone();
        let inner = py.detach(move || core::integrate(&s, t_end, rel_tol)).map_err(err)?;
        Ok(Trajectory { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("VortexSystem({})", self.inner.to_json())
    }
}

#[pyclass(frozen, module = "polyvortex")]
struct Report {
    inner: EquilibriumReport,
}

#[pymethods]
impl Report {
    /// ABSOLUTE, RIGID_TRANSLATION, ROTATION or NONE.
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.label()
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega
    }

    #[getter]
    fn center(&self) -> Option<Pair> {
        self.inner.center.map(pair)
    }

    #[getter]
    fn translation_velocity(&self) -> Option<Pair> {
        self.inner.translation_velocity.map(pair)
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    #[getter]
    fn max_speed(&self) -> f64 {
        self.inner.max_speed
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(kind={}, omega={}, residual={:e})",
            self.inner.kind.label(),
            self.inner.omega,
            self.inner.residual
        )
    }
}

#[pyclass(frozen, module = "polyvortex")]
struct Trajectory {
    inner: core::Trajectory,
}

#[pymethods]
impl Trajectory {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.times.clone()
    }

    #[getter]
    fn states(&self) -> Vec<Vec<Pair>> {
        self.inner
            .states
            .iter()
            .map(|s| s.positions().iter().copied().map(pair).collect())
            .collect()
    }

    #[getter]
    fn max_hamiltonian_drift(&self) -> f64 {
        self.inner.max_hamiltonian_drift
    }

    #[getter]
    fn max_distance_drift(&self) -> f64 {
        self.inner.max_distance_drift
    }

    fn return_error(&self) -> f64 {
        self.inner.return_error()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
}

fn points_to_py<'py>(py: Python<'py>, points: &[CorotatingPoint]) -> PyResult<Vec<Bound<'py, PyDict>>> {
    points
        .iter()
        .map(|p| {
            let d = PyDict::new(py);
            d.set_item("ray", p.ray.label())?;
            d.set_item("K", p.k)?;
            d.set_item("radius", p.radius)?;
            d.set_item("position", pair(p.position))?;
            d.set_item("residual", p.residual)?;
            Ok(d)
        })
        .collect()
}

#[pyclass(frozen, module = "polyvortex")]
struct NestedSolution {
    inner: nested::NestedSolution,
}

#[pymethods]
impl NestedSolution {
    /// "ALIGNED" or "STAGGERED".
    #[getter]
    fn alignment(&self) -> &'static str {
        match self.inner.alignment {
            Alignment::Aligned => "ALIGNED",
            Alignment::Staggered => "STAGGERED",
        }
    }

    /// Radius ratio |s2|/|s1|.
    #[getter]
    fn x(&self) -> f64 {
        self.inner.x
    }

    #[getter]
    fn s2(&self) -> Pair {
        pair(self.inner.config.s2)
    }

    #[getter]
    fn system(&self) -> VortexSystem {
        VortexSystem { inner: self.inner.system.clone() }
    }

    #[getter]
    fn report(&self) -> Report {
        Report { inner: self.inner.report }
    }

    /// Zero-vorticity points that co-rotate with this equilibrium.
    fn corotating_points<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let pts = core::corotating::corotating_nested(&self.inner.config).map_err(err)?;
        points_to_py(py, &pts)
    }

    fn __repr__(&self) -> String {
        format!(
            "NestedSolution(alignment={}, x={}, omega={})",
            self.alignment(),
            self.inner.x,
            self.inner.report.omega
        )
    }
}

#[pyfunction]
fn polygon_omega(n: usize, s: Pair, total_vorticity: f64) -> f64 {
    polygon::polygon_omega(n, pt(s), total_vorticity)
}

#[pyfunction]
fn polygon_field(n: usize, s: Pair, gamma: f64, z: Pair) -> PyResult<Pair> {
    polygon::polygon_field(n, pt(s), gamma, pt(z)).map(pair).map_err(err)
}

/// Eigenvalues of the circulant matrix `kind` ("C" or "C0") in Fourier order.
#[pyfunction]
fn circulant_spectrum(n: usize, kind: &str) -> PyResult<Vec<f64>> {
    let kind: CirculantKind = kind.parse().map_err(err)?;
    Ok(polygon::circulant_spectrum(n, kind).map_err(err)?.eigenvalues)
}

/// Orthonormal basis of polygon vorticity vectors that move rigidly.
#[pyfunction]
#[pyo3(signature = (n, case = "rotating"))]
fn rigidity_basis(n: usize, case: &str) -> PyResult<Vec<Vec<f64>>> {
    let case: MotionCase = case.parse().map_err(err)?;
    Ok(polygon::vorticity_solution_space(n, case).map_err(err)?.basis)
}

#[pyfunction]
fn lambda_n(n: usize) -> f64 {
    nested::lambda(n)
}

#[pyfunction]
fn mu_n(n: usize) -> f64 {
    nested::mu(n)
}

fn bounds(c: CountPrediction) -> (usize, usize) {
    match c {
        CountPrediction::Exact(e) => (e, e),
        CountPrediction::Between(lo, hi) => (lo, hi),
    }
}

/// Predicted equilibrium counts for the vorticity ratio Γ2/Γ1. Counts are
/// `(lo, hi)` tuples; `lo == hi` when the count is exact.
#[pyfunction]
fn classify_regime<'py>(py: Python<'py>, n: usize, gamma_ratio: f64) -> PyResult<Bound<'py, PyDict>> {
    let c = nested::classify_regime(n, gamma_ratio).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("regime", c.regime.label())?;
    d.set_item("aligned", bounds(c.aligned))?;
    d.set_item("staggered", bounds(c.staggered))?;
    d.set_item("mu_n", c.mu_n)?;
    d.set_item("lambda_n", c.lambda_n)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n, gamma1, gamma2, s1 = (1.0, 0.0)))]
fn solve_nested(n: usize, gamma1: f64, gamma2: f64, s1: Pair) -> PyResult<Vec<NestedSolution>> {
    let result = nested::solve_nested(n, gamma1, gamma2, pt(s1)).map_err(err)?;
    Ok(result.solutions.into_iter().map(|inner| NestedSolution { inner }).collect())
}

/// The stationary two-ring configuration with ratio -μₙ.
#[pyfunction]
fn absolute_equilibrium(n: usize, gamma1: f64) -> PyResult<VortexSystem> {
    let eq = nested::absolute_equilibrium(n, gamma1).map_err(err)?;
    Ok(VortexSystem { inner: eq.system })
}

#[pyfunction]
#[pyo3(signature = (n, gamma = 1.0, s = (1.0, 0.0)))]
fn corotating_single<'py>(py: Python<'py>, n: usize, gamma: f64, s: Pair) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let pts = core::corotating::corotating_single(n, pt(s), gamma).map_err(err)?;
    points_to_py(py, &pts)
}

#[pymodule]
fn polyvortex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<VortexSystem>()?;
    m.add_class::<Report>()?;
    m.add_class::<Trajectory>()?;
    m.add_class::<NestedSolution>()?;
    m.add_function(wrap_pyfunction!(polygon_omega, m)?)?;
    m.add_function(wrap_pyfunction!(polygon_field, m)?)?;
    m.add_function(wrap_pyfunction!(circulant_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(rigidity_basis, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_n, m)?)?;
    m.add_function(wrap_pyfunction!(mu_n, m)?)?;
    m.add_function(wrap_pyfunction!(classify_regime, m)?)?;
    m.add_function(wrap_pyfunction!(solve_nested, m)?)?;
    m.add_function(wrap_pyfunction!(absolute_equilibrium, m)?)?;
    m.add_function(wrap_pyfunction!(corotating_single, m)?)?;
    Ok(())
}
