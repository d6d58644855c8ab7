//! Python bindings: graph generation, modularity-matrix spectra, and the
//! EMA phase predictions, mirroring the `specphase` CLI surface.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use specphase::dist::DegreeDistribution;
use specphase::ema;
use specphase::ensembles::{from_cin_minus_cout, from_gamma_struct, gen_planted_regular, gen_sbm};
use specphase::objectives::{exact_min_ncut, modularity_q, ncut, Bipartition};
use specphase::spectral::{
    second_smallest_normalized_laplacian, spectral_outcome, LanczosConfig,
};
use specphase::{Error, Graph, PlantedKind, PlantedSpec, Provenance};

fn pyerr(e: Error) -> PyErr {
    match e.exit_code() {
        2 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// An undirected simple graph, optionally carrying planted two-block labels.
#[pyclass(name = "Graph")]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[getter]
    fn n_nodes(&self) -> usize {
        self.inner.n_nodes()
    }

    #[getter]
    fn n_edges(&self) -> u64 {
        self.inner.n_edges()
    }

    fn degrees(&self) -> Vec<u32> {
        self.inner.degrees().to_vec()
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges()
    }

    fn planted_labels(&self) -> Option<Vec<u8>> {
        self.inner.planted_labels().map(|l| l.to_vec())
    }

    fn cross_edge_count(&self) -> Option<u64> {
        self.inner.cross_edge_count()
    }

    fn is_connected(&self) -> bool {
        self.inner.connected_on_nonisolated()
    }

    fn write_edge_list(&self, path: &str) -> PyResult<()> {
        self.inner.write_edge_list_file(path).map_err(pyerr)
    }

    #[staticmethod]
    fn read_edge_list(path: &str) -> PyResult<Self> {
        Ok(Self { inner: Graph::read_edge_list_file(path).map_err(pyerr)? })
    }

    #[staticmethod]
    fn from_edges(n_nodes: usize, edges: Vec<(u32, u32)>, labels: Option<Vec<u8>>) -> PyResult<Self> {
        Ok(Self {
            inner: Graph::from_edges(n_nodes, &edges, labels, Provenance::External)
                .map_err(pyerr)?,
        })
    }

    /// Modularity Q_θ (spin form, constants dropped) of a 1/2-labeling.
    fn modularity(&self, labels: Vec<u8>, theta: f64) -> PyResult<f64> {
        let part = Bipartition::new(labels).map_err(pyerr)?;
        Ok(modularity_q(&self.inner, &part, theta))
    }

    /// Normalized cut K·|E(S₁,S₂)|/(K₁K₂) of a 1/2-labeling.
    fn ncut(&self, labels: Vec<u8>) -> PyResult<f64> {
        let part = Bipartition::new(labels).map_err(pyerr)?;
        ncut(&self.inner, &part).map_err(pyerr)
    }

    /// Exact optimal normalized cut θ* as a (num, den) pair (N ≤ 20).
    fn exact_min_ncut(&self) -> PyResult<(i64, i64)> {
        let r = exact_min_ncut(&self.inner).map_err(pyerr)?;
        Ok((r.num, r.den))
    }

    /// λ₂ of the normalized Laplacian and the Cheeger lower bound λ₂/2.
    fn laplacian_lambda2(&self, tol: f64, seed: u64) -> PyResult<(f64, f64)> {
        let l = second_smallest_normalized_laplacian(&self.inner, tol, seed).map_err(pyerr)?;
        Ok((l.lambda2, l.cheeger_lower_bound))
    }

    fn __repr__(&self) -> String {
        format!("Graph(n_nodes={}, n_edges={})", self.inner.n_nodes(), self.inner.n_edges())
    }
}

/// Planted random c-regular graph with structure strength Γ.
#[pyfunction]
#[pyo3(signature = (n_nodes, c, gamma_struct, p1=0.5, seed=0))]
fn generate_regular(
    n_nodes: usize,
    c: u32,
    gamma_struct: f64,
    p1: f64,
    seed: u64,
) -> PyResult<PyGraph> {
    let spec = PlantedSpec { n_nodes, p1, kind: PlantedKind::Regular { c }, gamma_struct, seed };
    Ok(PyGraph { inner: gen_planted_regular(&spec).map_err(pyerr)? })
}

/// Planted two-block SBM with Bernoulli pair probabilities c_in/N, c_out/N.
#[pyfunction]
#[pyo3(signature = (n_nodes, c_in, c_out, p1=0.5, seed=0))]
fn generate_sbm(n_nodes: usize, c_in: f64, c_out: f64, p1: f64, seed: u64) -> PyResult<PyGraph> {
    let c_bar = ((c_in + c_out) / 2.0).max(f64::MIN_POSITIVE);
    let gamma_struct = ((c_in - c_out) / (2.0 * c_bar)).clamp(0.0, 1.0);
    let spec =
        PlantedSpec { n_nodes, p1, kind: PlantedKind::Sbm { c_in, c_out }, gamma_struct, seed };
    Ok(PyGraph { inner: gen_sbm(&spec).map_err(pyerr)? })
}

/// Leading eigenpair of B = A − θ·ccᵀ/K with partition statistics.
#[pyfunction]
#[pyo3(signature = (graph, theta=1.0, tol=1e-8, seed=0))]
fn spectral<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    theta: f64,
    tol: f64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let out = spectral_outcome(
        &graph.inner,
        theta,
        &LanczosConfig { tol, seed, ..Default::default() },
    )
    .map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("lambda1", out.lambda1)?;
    d.set_item("residual", out.residual)?;
    d.set_item("partition", out.partition)?;
    d.set_item("unpartitioned", out.unpartitioned)?;
    d.set_item("overlap", out.overlap)?;
    d.set_item("ipr", out.ipr)?;
    d.set_item("ones_alignment", out.ones_alignment)?;
    d.set_item("degenerate", out.degenerate)?;
    d.set_item("vector", out.vector)?;
    Ok(d)
}

fn dist_from_args(c: Option<u32>, c_bar: Option<f64>, trunc_eps: f64) -> PyResult<DegreeDistribution> {
    match (c, c_bar) {
        (Some(c), None) => DegreeDistribution::regular(c).map_err(pyerr),
        (None, Some(cb)) => DegreeDistribution::poisson_truncated(cb, trunc_eps).map_err(pyerr),
        _ => Err(PyValueError::new_err("pass exactly one of c (regular) or c_bar (Poisson)")),
    }
}

/// EMA phase classification at one (ensemble, Γ, θ) query.
#[pyfunction]
#[pyo3(signature = (gamma_struct, theta=1.0, p1=0.5, c=None, c_bar=None, trunc_eps=1e-12, tol=1e-12))]
#[allow(clippy::too_many_arguments)]
fn classify_phase<'py>(
    py: Python<'py>,
    gamma_struct: f64,
    theta: f64,
    p1: f64,
    c: Option<u32>,
    c_bar: Option<f64>,
    trunc_eps: f64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let dist = dist_from_args(c, c_bar, trunc_eps)?;
    let sol = ema::classify_phase(&ema::PhaseQuery { dist, gamma_struct, theta, p1 }, tol)
        .map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("phase", sol.phase.code().to_string())?;
    d.set_item("phi", sol.phi)?;
    d.set_item("lambda1", sol.lambda1)?;
    d.set_item("a_hat", sol.a_hat)?;
    d.set_item("m_hat_sq", sol.m_hat_sq)?;
    d.set_item("omega_hat_zero", sol.omega_hat_zero)?;
    Ok(d)
}

/// Detectability threshold Γ* of an ensemble (θ-independent).
#[pyfunction]
#[pyo3(signature = (c=None, c_bar=None, trunc_eps=1e-12, tol=1e-12))]
fn detectability_threshold(
    c: Option<u32>,
    c_bar: Option<f64>,
    trunc_eps: f64,
    tol: f64,
) -> PyResult<f64> {
    ema::detectability_threshold(&dist_from_args(c, c_bar, trunc_eps)?, tol).map_err(pyerr)
}

/// All regular-graph closed forms at one (c, Γ, θ, p1) point.
#[pyfunction]
#[pyo3(signature = (c, gamma, theta=1.0, p1=0.5))]
fn regular_closed_forms<'py>(
    py: Python<'py>,
    c: u32,
    gamma: f64,
    theta: f64,
    p1: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let f = ema::regular_closed_forms(c, gamma, theta, p1).map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("lambda1_detectable", f.lambda1_detectable)?;
    d.set_item("m_hat_sq", f.m_hat_sq)?;
    d.set_item("lambda1_undetectable", f.lambda1_undetectable)?;
    d.set_item("gamma_star", f.gamma_star)?;
    d.set_item("gamma_un", f.gamma_un)?;
    d.set_item("theta_max", f.theta_max)?;
    d.set_item("lambda1_ones", f.lambda1_ones)?;
    Ok(d)
}

/// Gaussian-ansatz overlap prediction for the regular ensemble (p1 = 1/2).
#[pyfunction]
#[pyo3(signature = (c, gamma, p1=0.5))]
fn predicted_overlap_regular(c: u32, gamma: f64, p1: f64) -> PyResult<f64> {
    ema::predicted_overlap_regular(c, gamma, p1).map_err(pyerr)
}

/// Dense-approximation threshold Γ = 1/√c̄ (comparison curve).
#[pyfunction]
fn dense_approximation_threshold(c_bar: f64) -> f64 {
    ema::dense_approximation_threshold(c_bar)
}

/// Structure-strength conversions: Γ ↔ γ ↔ c_in − c_out at fixed (c̄, p1).
#[pyfunction]
#[pyo3(signature = (c_bar, p1=0.5, gamma_struct=None, cin_minus_cout=None))]
fn structure_strength<'py>(
    py: Python<'py>,
    c_bar: f64,
    p1: f64,
    gamma_struct: Option<f64>,
    cin_minus_cout: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let s = match (gamma_struct, cin_minus_cout) {
        (Some(g), None) => from_gamma_struct(c_bar, p1, g).map_err(pyerr)?,
        (None, Some(diff)) => from_cin_minus_cout(c_bar, p1, diff).map_err(pyerr)?,
        _ => {
            return Err(PyValueError::new_err(
                "pass exactly one of gamma_struct or cin_minus_cout",
            ))
        }
    };
    let d = PyDict::new(py);
    d.set_item("gamma_struct", s.gamma_struct)?;
    d.set_item("gamma_raw", s.gamma_raw)?;
    d.set_item("cin_minus_cout", s.cin_minus_cout)?;
    Ok(d)
}

#[pymodule]
fn specphase_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(generate_regular, m)?)?;
    m.add_function(wrap_pyfunction!(generate_sbm, m)?)?;
    m.add_function(wrap_pyfunction!(spectral, m)?)?;
    m.add_function(wrap_pyfunction!(classify_phase, m)?)?;
    m.add_function(wrap_pyfunction!(detectability_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(regular_closed_forms, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_overlap_regular, m)?)?;
    m.add_function(wrap_pyfunction!(dense_approximation_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(structure_strength, m)?)?;
    Ok(())
}
