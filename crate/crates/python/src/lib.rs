//! Python bindings for `plate_ham`.

use plate_ham::diagnostics::{self, ProblemSpec};
use plate_ham::given_deflection::C0Validity;
use plate_ham::{ham, interp, kernel, BoundaryKind, PlateError, Precision, SolveMode, StopRule};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: PlateError) -> PyErr {
    match e {
        PlateError::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

/// Power series in `y`, stored as ascending coefficients.
#[pyclass(name = "PolySeries", module = "plate_ham", from_py_object)]
#[derive(Clone)]
struct PyPolySeries {
    inner: plate_ham::PolySeries,
}

#[pymethods]
impl PyPolySeries {
    #[new]
    fn new(coeffs: Vec<f64>) -> Self {
        Self {
            inner: plate_ham::PolySeries::new(coeffs),
        }
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn valuation(&self) -> Option<usize> {
        self.inner.valuation()
    }

    fn evaluate(&self, y: f64) -> PyResult<f64> {
        self.inner.evaluate(y).map_err(to_py)
    }

    fn multiply(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.multiply(&other.inner),
        }
    }

    fn scale(&self, factor: f64) -> Self {
        Self {
            inner: self.inner.scale(factor),
        }
    }

    fn truncate(&self, order: usize) -> Self {
        Self {
            inner: self.inner.truncate(order),
        }
    }

    /// `int_0^1 f(e)/e de`; needs a zero constant term.
    fn unit_weighted_integral(&self) -> PyResult<f64> {
        self.inner.unit_weighted_integral().map_err(to_py)
    }

    /// `W` with `y W' = phi` and `W(1) = 0`.
    fn deflection_from_phi(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.deflection_from_phi().map_err(to_py)?,
        })
    }

    fn __add__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner - &other.inner,
        }
    }

    fn __mul__(&self, other: &Self) -> Self {
        self.multiply(other)
    }

    fn __call__(&self, y: f64) -> PyResult<f64> {
        self.evaluate(y)
    }

    fn __len__(&self) -> usize {
        self.inner.coeffs().len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("PolySeries({:?})", self.inner.coeffs())
    }
}

/// Boundary condition at the plate edge.
#[pyclass(name = "BoundarySpec", module = "plate_ham", from_py_object)]
#[derive(Clone)]
struct PyBoundarySpec {
    inner: plate_ham::BoundarySpec,
}

#[pymethods]
impl PyBoundarySpec {
    #[new]
    #[pyo3(signature = (kind = "clamped", nu = 0.3))]
    fn new(kind: &str, nu: f64) -> PyResult<Self> {
        let kind: BoundaryKind = parse(kind)?;
        Ok(Self {
            inner: plate_ham::BoundarySpec::new(kind, nu).map_err(to_py)?,
        })
    }

    #[getter]
    fn kind(&self) -> String {
        serde_json::to_value(self.inner.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.inner.lambda
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.inner.nu
    }

    fn apply_k(&self, f: &PyPolySeries) -> PyPolySeries {
        PyPolySeries {
            inner: kernel::apply_k(&f.inner, &self.inner),
        }
    }

    fn apply_g(&self, f: &PyPolySeries) -> PyPolySeries {
        PyPolySeries {
            inner: kernel::apply_g(&f.inner, &self.inner),
        }
    }

    fn load_forcing(&self) -> PyPolySeries {
        PyPolySeries {
            inner: kernel::load_forcing(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundarySpec(kind='{}', lam={}, mu={}, nu={})",
            self.kind(),
            self.inner.lambda,
            self.inner.mu,
            self.inner.nu
        )
    }
}

fn boundary_or_default(b: Option<PyBoundarySpec>) -> plate_ham::BoundarySpec {
    b.map_or_else(plate_ham::BoundarySpec::clamped, |b| b.inner)
}

/// Result of a solve: history, final series and status.
#[pyclass(name = "RunReport", module = "plate_ham", frozen)]
struct PyRunReport {
    inner: plate_ham::RunReport,
}

#[pymethods]
impl PyRunReport {
    #[getter]
    fn status(&self) -> &'static str {
        self.inner.status.as_str()
    }

    /// `(iteration, order, err, q, w0_over_h, wall_ms)` per record.
    #[getter]
    fn records(&self) -> Vec<(usize, usize, f64, f64, f64, f64)> {
        self.inner
            .records
            .iter()
            .map(|r| (r.iteration, r.order, r.err, r.q, r.w0_over_h, r.wall_ms))
            .collect()
    }

    #[getter]
    fn phi(&self) -> PyPolySeries {
        PyPolySeries::new(self.inner.phi.clone())
    }

    #[getter]
    fn s(&self) -> PyPolySeries {
        PyPolySeries::new(self.inner.s.clone())
    }

    #[getter]
    fn err(&self) -> f64 {
        self.inner.final_err()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.final_q()
    }

    #[getter]
    fn w0_over_h(&self) -> f64 {
        self.inner.final_w0_over_h()
    }

    fn iterations_to(&self, level: f64) -> Option<usize> {
        self.inner.iterations_to(level)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "RunReport(status='{}', err={:e}, q={}, w0_over_h={})",
            self.status(),
            self.err(),
            self.q(),
            self.w0_over_h()
        )
    }
}

struct SolveOptions {
    c0: Option<f64>,
    c1: Option<f64>,
    c2: Option<f64>,
    order: usize,
    iterate: bool,
    m: usize,
    n: usize,
    stop: StopRule,
    boundary: plate_ham::BoundarySpec,
    grid_k: usize,
    precision: Precision,
}

impl SolveOptions {
    fn mode(&self) -> SolveMode {
        if self.iterate {
            SolveMode::Iterate {
                m: self.m,
                n: self.n,
            }
        } else {
            SolveMode::Series { order: self.order }
        }
    }

    fn pair(&self, auto: f64) -> (f64, f64) {
        let c0 = self.c0.unwrap_or(auto);
        (self.c1.unwrap_or(c0), self.c2.unwrap_or(c0))
    }
}

#[allow(clippy::too_many_arguments)]
fn options(
    c0: Option<f64>,
    c1: Option<f64>,
    c2: Option<f64>,
    order: usize,
    iterate: bool,
    m: usize,
    n: usize,
    tol: f64,
    max_iter: usize,
    boundary: Option<PyBoundarySpec>,
    grid_k: usize,
    precision: &str,
) -> PyResult<SolveOptions> {
    Ok(SolveOptions {
        c0,
        c1,
        c2,
        order,
        iterate,
        m,
        n,
        stop: StopRule {
            tol,
            max_iter,
            ..StopRule::default()
        },
        boundary: boundary_or_default(boundary),
        grid_k,
        precision: parse(precision)?,
    })
}

/// Solve for a prescribed load `q`; `c0=None` uses the empirical formula.
#[pyfunction]
#[pyo3(signature = (q, c0 = None, *, order = 100, iterate = false, m = 5, n = 100, c1 = None, c2 = None,
    tol = 1e-12, max_iter = 500, boundary = None, grid_k = 100, precision = "double"))]
#[allow(clippy::too_many_arguments)]
fn solve_q(
    py: Python<'_>,
    q: f64,
    c0: Option<f64>,
    order: usize,
    iterate: bool,
    m: usize,
    n: usize,
    c1: Option<f64>,
    c2: Option<f64>,
    tol: f64,
    max_iter: usize,
    boundary: Option<PyBoundarySpec>,
    grid_k: usize,
    precision: &str,
) -> PyResult<PyRunReport> {
    let o = options(
        c0, c1, c2, order, iterate, m, n, tol, max_iter, boundary, grid_k, precision,
    )?;
    let (c1, c2) = o.pair(plate_ham::empirical_c0_q(q, iterate));
    let p = plate_ham::GivenLoadProblem {
        q,
        boundary: o.boundary,
        c1,
        c2,
        mode: o.mode(),
        stop: o.stop,
        grid_k: o.grid_k,
    };
    let inner = py
        .detach(|| plate_ham::solve_given_q_in(&p, o.precision))
        .map_err(to_py)?;
    Ok(PyRunReport { inner })
}

/// Solve for a prescribed central deflection `a`; the load is part of the result.
#[pyfunction]
#[pyo3(signature = (a, c0 = None, *, order = 100, iterate = false, m = 5, n = 100, c1 = None, c2 = None,
    tol = 1e-12, max_iter = 500, boundary = None, grid_k = 100, precision = "double"))]
#[allow(clippy::too_many_arguments)]
fn solve_a(
    py: Python<'_>,
    a: f64,
    c0: Option<f64>,
    order: usize,
    iterate: bool,
    m: usize,
    n: usize,
    c1: Option<f64>,
    c2: Option<f64>,
    tol: f64,
    max_iter: usize,
    boundary: Option<PyBoundarySpec>,
    grid_k: usize,
    precision: &str,
) -> PyResult<PyRunReport> {
    let o = options(
        c0, c1, c2, order, iterate, m, n, tol, max_iter, boundary, grid_k, precision,
    )?;
    let (c1, c2) = o.pair(plate_ham::empirical_c0_a(a, iterate).0);
    let p = plate_ham::GivenDeflectionProblem {
        a,
        boundary: o.boundary,
        c1,
        c2,
        mode: o.mode(),
        stop: o.stop,
        grid_k: o.grid_k,
    };
    let inner = py
        .detach(|| plate_ham::solve_given_a_in(&p, o.precision))
        .map_err(to_py)?;
    Ok(PyRunReport { inner })
}

#[pyfunction]
#[pyo3(signature = (q, iterated = false))]
fn empirical_c0_q(q: f64, iterated: bool) -> f64 {
    plate_ham::empirical_c0_q(q, iterated)
}

/// Returns `(c0, in_range)`.
#[pyfunction]
#[pyo3(signature = (a, iterated = false))]
fn empirical_c0_a(a: f64, iterated: bool) -> (f64, bool) {
    let (c0, validity) = plate_ham::empirical_c0_a(a, iterated);
    (c0, validity == C0Validity::InRange)
}

/// Discrete residual `Err` of a candidate solution.
#[pyfunction]
#[pyo3(signature = (phi, s, q, boundary = None, grid_k = 100))]
fn residual_err(
    phi: &PyPolySeries,
    s: &PyPolySeries,
    q: f64,
    boundary: Option<PyBoundarySpec>,
    grid_k: usize,
) -> PyResult<f64> {
    let b = boundary_or_default(boundary);
    ham::residual_err(&phi.inner, &s.inner, q, &b, grid_k, false)
        .map(|r| r.err)
        .map_err(to_py)
}

/// Largest relative gap between interpolation and staggered homotopy iterates.
#[pyfunction]
#[pyo3(signature = (q, theta, n_iters = 50, truncation = 100, boundary = None))]
fn equivalence_check(
    q: f64,
    theta: f64,
    n_iters: usize,
    truncation: usize,
    boundary: Option<PyBoundarySpec>,
) -> PyResult<f64> {
    interp::equivalence_check(
        q,
        theta,
        n_iters,
        truncation,
        &boundary_or_default(boundary),
    )
    .map_err(to_py)
}

/// `(y, r_over_Ra, W, w_over_h)` on a uniform grid in `y`.
#[pyfunction]
#[pyo3(signature = (phi, samples = 21, nu = 0.3))]
fn deflection_curve(
    phi: &PyPolySeries,
    samples: usize,
    nu: f64,
) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let curve = diagnostics::deflection_curve(&phi.inner, samples, nu).map_err(to_py)?;
    Ok(curve
        .into_iter()
        .map(|p| (p.y, p.r_over_ra, p.w, p.w_over_h))
        .collect())
}

/// Series residual for each `c0`; returns `(rows, argmin)` with rows `(c0, err, status)`.
#[pyfunction]
#[pyo3(signature = (grid, order, *, q = None, a = None, boundary = None, grid_k = 100))]
#[allow(clippy::type_complexity)]
fn sweep_c0(
    py: Python<'_>,
    grid: Vec<f64>,
    order: usize,
    q: Option<f64>,
    a: Option<f64>,
    boundary: Option<PyBoundarySpec>,
    grid_k: usize,
) -> PyResult<(Vec<(f64, f64, &'static str)>, Option<f64>)> {
    let problem = match (q, a) {
        (Some(q), None) => ProblemSpec::GivenLoad(q),
        (None, Some(a)) => ProblemSpec::GivenDeflection(a),
        _ => return Err(PyValueError::new_err("give exactly one of q and a")),
    };
    let b = boundary_or_default(boundary);
    let table = py
        .detach(|| diagnostics::sweep_c0(problem, &b, &grid, order, grid_k))
        .map_err(to_py)?;
    let rows = table
        .rows
        .iter()
        .map(|r| (r.c0, r.err, r.status.as_str()))
        .collect();
    Ok((rows, table.argmin))
}

#[pyfunction]
#[pyo3(signature = (w0, nu = 0.3))]
fn w_over_h(w0: f64, nu: f64) -> f64 {
    diagnostics::w_over_h(w0, nu)
}

#[pymodule]
#[pyo3(name = "plate_ham")]
fn plate_ham_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds the classes and functions of the extension to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolySeries>()?;
    m.add_class::<PyBoundarySpec>()?;
    m.add_class::<PyRunReport>()?;
    m.add_function(wrap_pyfunction!(solve_q, m)?)?;
    m.add_function(wrap_pyfunction!(solve_a, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_c0_q, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_c0_a, m)?)?;
    m.add_function(wrap_pyfunction!(residual_err, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_check, m)?)?;
    m.add_function(wrap_pyfunction!(deflection_curve, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_c0, m)?)?;
    m.add_function(wrap_pyfunction!(w_over_h, m)?)?;
    Ok(())
}
