//! Python bindings: graphs, growth-rate enclosures, synthesis certificates and subgroup
//! reports.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use densegrowth::graph::EdgeSubset;
use densegrowth::spectral::{self, PerronOptions};
use densegrowth::stallings;
use densegrowth::synthesis::{self, Limits};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Graph", module = "densegrowth", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: densegrowth::Multigraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = densegrowth::Multigraph::new(vertex_count, edges).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn complete(q: usize) -> PyResult<Self> {
        let inner = densegrowth::Multigraph::complete(q).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        let inner = densegrowth::Multigraph::cycle(n).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn rose(loops: usize) -> Self {
        PyGraph {
            inner: densegrowth::Multigraph::rose(loops),
        }
    }

    #[staticmethod]
    fn decode(text: &str) -> PyResult<Self> {
        let inner = densegrowth::Multigraph::decode(text).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    fn encode(&self) -> String {
        self.inner.encode()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// Length of a shortest cycle, `None` for forests.
    fn girth(&self) -> Option<usize> {
        self.inner.girth()
    }

    fn subdivide(&self, edges: Vec<usize>) -> PyResult<Self> {
        let subset = EdgeSubset::new(&self.inner, edges).map_err(value_error)?;
        let inner = self.inner.subdivide(&subset).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    fn subdivide_uniform(&self, k: usize) -> PyResult<Self> {
        let inner = self.inner.subdivide_uniform(k).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    fn permutation_lift(&self, m: usize, voltages: Vec<Vec<usize>>) -> PyResult<Self> {
        let inner = self.inner.permutation_lift(m, &voltages).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    /// Enclosure `(lower, upper)` of the non-backtracking Perron root.
    #[pyo3(signature = (tol = spectral::DEFAULT_TOLERANCE, max_iter = spectral::DEFAULT_MAX_ITER))]
    fn growth_rate(&self, py: Python<'_>, tol: f64, max_iter: usize) -> PyResult<(f64, f64)> {
        let est = py
            .detach(|| spectral::growth_rate_with(&self.inner, PerronOptions { tol, max_iter }))
            .map_err(value_error)?;
        Ok((est.lower, est.upper))
    }

    fn nb_walk_counts(&self, v: usize, n: usize) -> PyResult<Vec<String>> {
        let counts = spectral::nb_walk_counts(&self.inner, v, n).map_err(value_error)?;
        Ok(counts.iter().map(|c| c.to_string()).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.vertex_count()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

#[pyclass(name = "Certificate", module = "densegrowth", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate {
    inner: synthesis::Certificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn decode(text: &str) -> PyResult<Self> {
        let inner = synthesis::Certificate::decode(text).map_err(value_error)?;
        Ok(PyCertificate { inner })
    }

    fn encode(&self) -> String {
        self.inner.encode()
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.graph.clone(),
        }
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.params.alpha
    }

    #[getter]
    fn eps(&self) -> f64 {
        self.inner.params.eps
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.params.k
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.params.n
    }

    #[getter]
    fn eigenvalue(&self) -> (f64, f64) {
        (self.inner.eigenvalue.lower, self.inner.eigenvalue.upper)
    }

    #[getter]
    fn steps(&self) -> usize {
        self.inner.stats.sweep_steps
    }

    #[getter]
    fn girth_achieved(&self) -> usize {
        self.inner.girth_achieved
    }

    /// `(i, edge, lower, upper)` for every evaluated sweep state.
    #[getter]
    fn trace(&self) -> Vec<(usize, Option<usize>, f64, f64)> {
        self.inner
            .trace
            .steps()
            .iter()
            .map(|s| (s.i, s.edge, s.lower, s.upper))
            .collect()
    }

    /// `(name, passed, detail)` for every independent check.
    fn verify(&self, py: Python<'_>) -> Vec<(String, bool, String)> {
        py.detach(|| synthesis::verify_certificate(&self.inner))
            .into_iter()
            .map(|c| (c.name.to_string(), c.passed, c.detail))
            .collect()
    }

    fn __repr__(&self) -> String {
        let e = self.inner.eigenvalue;
        format!(
            "Certificate(alpha={}, lambda=[{}, {}], vertices={})",
            self.inner.params.alpha,
            e.lower,
            e.upper,
            self.inner.graph.vertex_count()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (r, alpha, eps, seed = 0, max_vertices = 100_000, max_iters = 1_000_000, max_cover_attempts = 16, girth_override = None))]
#[allow(clippy::too_many_arguments)]
fn synthesize(
    py: Python<'_>,
    r: usize,
    alpha: f64,
    eps: f64,
    seed: u64,
    max_vertices: usize,
    max_iters: usize,
    max_cover_attempts: usize,
    girth_override: Option<usize>,
) -> PyResult<PyCertificate> {
    let limits = Limits {
        max_vertices,
        max_iters,
        max_cover_attempts,
        girth_override,
    };
    py.detach(|| synthesis::synthesize(r, alpha, eps, seed, limits))
        .map(|inner| PyCertificate { inner })
        .map_err(|e| {
            if e.is_invalid_input() {
                PyValueError::new_err(e.to_string())
            } else {
                PyRuntimeError::new_err(e.to_string())
            }
        })
}

/// `(K, n, eps_eff, girth_target)` for the given target.
#[pyfunction]
fn select_parameters(r: usize, alpha: f64, eps: f64) -> PyResult<(usize, usize, f64, usize)> {
    let p = synthesis::select_parameters(r, alpha, eps, 0, Limits::unlimited())
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((p.k, p.n, p.eps_eff, p.girth_target))
}

/// Subgroup of `F_r` carried by `graph`: rank, generator words, ball counts and growth.
#[pyfunction]
#[pyo3(signature = (graph, r, basepoint = 0, nmax = stallings::DEFAULT_NMAX))]
fn subgroup<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    r: usize,
    basepoint: usize,
    nmax: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rep = py
        .detach(|| stallings::subgroup_report(&graph.inner, r, basepoint, nmax))
        .map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("rank", rep.rank)?;
    out.set_item("generators", rep.generators.iter().map(|w| w.to_string()).collect::<Vec<_>>())?;
    out.set_item("gamma", rep.gamma.iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
    out.set_item("omega_estimate", rep.omega_estimate)?;
    out.set_item("lambda", (rep.lambda.lower, rep.lambda.upper))?;
    out.set_item("generators_file", rep.generators_file())?;
    Ok(out)
}

#[pymodule]
fn densegrowth_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(select_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(subgroup, m)?)?;
    Ok(())
}
