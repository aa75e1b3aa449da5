//! Python bindings for `linentropy`.
//!
//! Dimension pairs are passed as two integers `d_a, d_b`; states as nested lists of Python
//! complex numbers. Reports come back as plain dicts, built from the same JSON the CLI emits.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use linentropy::bounds::{self, DimPair};
use linentropy::verify::{self, Ensemble, SamplerConfig};
use linentropy::{extremal, report, state_io, ComplexMatrix, Error, Tolerances};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Numerical(_) => PyArithmeticError::new_err(e.to_string()),
        Error::CampaignAborted { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for linentropy::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn dims(d_a: usize, d_b: usize) -> PyResult<DimPair> {
    DimPair::new(d_a, d_b).py()
}

/// Serialises `value` and hands it to Python's `json.loads`.
fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A validated density matrix on a product of subsystems.
#[pyclass(
    name = "DensityMatrix",
    module = "linentropy",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
pub struct PyDensityMatrix {
    inner: linentropy::DensityMatrix,
}

impl From<linentropy::DensityMatrix> for PyDensityMatrix {
    fn from(inner: linentropy::DensityMatrix) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyDensityMatrix {
    #[new]
    #[pyo3(signature = (matrix, dims, tol_herm = 1e-10, tol_psd = 1e-10, tol_trace = 1e-10))]
    fn new(
        matrix: Vec<Vec<Complex64>>,
        dims: Vec<usize>,
        tol_herm: f64,
        tol_psd: f64,
        tol_trace: f64,
    ) -> PyResult<Self> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let m = ComplexMatrix::new(n, n, matrix.into_iter().flatten().collect()).py()?;
        let tol = Tolerances {
            herm: tol_herm,
            psd: tol_psd,
            trace: tol_trace,
        };
        linentropy::DensityMatrix::with_tolerances(m, &dims, &tol)
            .py()
            .map(Self::from)
    }

    /// Parses the JSON state format used by the command line.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        state_io::parse_state(text, &Tolerances::default())
            .py()
            .map(Self::from)
    }

    #[staticmethod]
    fn from_pure(psi: Vec<Complex64>, dims: Vec<usize>) -> PyResult<Self> {
        linentropy::DensityMatrix::from_pure(&psi, &dims)
            .py()
            .map(Self::from)
    }

    #[staticmethod]
    fn maximally_mixed(dims: Vec<usize>) -> PyResult<Self> {
        linentropy::DensityMatrix::maximally_mixed(&dims)
            .py()
            .map(Self::from)
    }

    fn to_json(&self) -> PyResult<String> {
        state_io::state_to_json(&self.inner).py()
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.matrix();
        (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn linear_entropy(&self) -> f64 {
        self.inner.linear_entropy()
    }

    fn renyi2_entropy(&self) -> f64 {
        self.inner.renyi2_entropy()
    }

    fn eigenvalues(&self) -> PyResult<Vec<f64>> {
        self.inner.eigenvalues().py()
    }

    /// Reduced state on the subsystems listed in `keep`.
    fn partial_trace(&self, keep: Vec<usize>) -> PyResult<Self> {
        self.inner.partial_trace(&keep).py().map(Self::from)
    }

    fn mix(&self, other: &PyDensityMatrix, weight: f64) -> PyResult<Self> {
        self.inner.mix(&other.inner, weight).py().map(Self::from)
    }

    /// `(S_L(ρ_A), S_L(ρ_B), S_L(ρ_AB))`.
    fn entropy_point(&self) -> PyResult<(f64, f64, f64)> {
        let p = report::EntropyPoint::of_state(&self.inner).py()?;
        Ok((p.x, p.y, p.z))
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dims={:?})", self.inner.dims())
    }
}

#[pyfunction]
fn sharp_f(x: f64, y: f64, d_a: usize, d_b: usize) -> PyResult<(f64, &'static str)> {
    let (f, b) = bounds::sharp_f(x, y, dims(d_a, d_b)?).py()?;
    Ok((f, b.as_str()))
}

#[pyfunction]
fn isa_h(x: f64, y: f64, d_a: usize, d_b: usize) -> PyResult<f64> {
    bounds::isa_h(x, y, dims(d_a, d_b)?).py()
}

#[pyfunction]
fn dssa_g(x: f64, y: f64, d_a: usize, d_b: usize) -> PyResult<f64> {
    bounds::dssa_g(x, y, dims(d_a, d_b)?).py()
}

#[pyfunction]
fn dssa_restriction_r(y: f64, d_a: usize, d_b: usize) -> PyResult<f64> {
    bounds::dssa_restriction_r(y, dims(d_a, d_b)?).py()
}

/// `(x + y, |x − y|)`.
#[pyfunction]
fn classic_bounds(x: f64, y: f64) -> (f64, f64) {
    bounds::classic_bounds(x, y)
}

#[pyfunction]
fn audenaert_bound(x: f64, y: f64) -> Option<f64> {
    bounds::audenaert_bound(x, y)
}

#[pyfunction]
fn appel_bound(x: f64, y: f64, d_a: usize, d_b: usize) -> PyResult<f64> {
    bounds::appel_nonlinear_bound(x, y, dims(d_a, d_b)?).py()
}

#[pyfunction]
fn renyi_f(x: f64, y: f64, d_a: usize, d_b: usize) -> PyResult<(f64, &'static str)> {
    let (f, b) = bounds::renyi_f(x, y, dims(d_a, d_b)?).py()?;
    Ok((f, b.as_str()))
}

#[pyfunction]
fn purity_f(gamma_a: f64, gamma_b: f64, d_a: usize, d_b: usize) -> PyResult<(f64, &'static str)> {
    let (f, b) = bounds::purity_f(gamma_a, gamma_b, dims(d_a, d_b)?).py()?;
    Ok((f, b.as_str()))
}

/// Lower bound on `S_L(ρ_AB)`, with a label for the side and branch that attained it.
#[pyfunction]
fn inverted_lower_f(x: f64, y: f64, d_a: usize, d_b: usize) -> PyResult<(f64, String)> {
    let b = bounds::inverted_lower_f(x, y, dims(d_a, d_b)?).py()?;
    Ok((b.value, b.method.label()))
}

#[pyfunction]
fn evaluate_point<'py>(
    py: Python<'py>,
    x: f64,
    y: f64,
    z: f64,
    d_a: usize,
    d_b: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let r = report::evaluate_point(report::EntropyPoint::new(x, y, z), dims(d_a, d_b)?).py()?;
    to_dict(py, &r)
}

#[pyfunction]
fn evaluate_all<'py>(py: Python<'py>, rho: &PyDensityMatrix) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &report::evaluate_all(&rho.inner).py()?)
}

#[pyfunction]
fn isa_family(alpha: f64, d_a: usize, d_b: usize) -> PyResult<PyDensityMatrix> {
    extremal::isa_family(alpha, dims(d_a, d_b)?)
        .py()
        .map(Into::into)
}

#[pyfunction]
fn dssa_family(alpha: f64, beta: f64, d_a: usize, d_b: usize) -> PyResult<PyDensityMatrix> {
    extremal::dssa_family(alpha, beta, dims(d_a, d_b)?)
        .py()
        .map(Into::into)
}

#[pyfunction]
fn mix_with_maximally_mixed(rho: &PyDensityMatrix, alpha: f64) -> PyResult<PyDensityMatrix> {
    extremal::mix_with_maximally_mixed(&rho.inner, alpha)
        .py()
        .map(Into::into)
}

/// A state whose entropy point is `(x, y, f(x, y))`.
#[pyfunction]
fn boundary_state_for(x: f64, y: f64, d_a: usize, d_b: usize) -> PyResult<PyDensityMatrix> {
    extremal::boundary_state_for(x, y, dims(d_a, d_b)?)
        .py()
        .map(Into::into)
}

fn parse_ensemble(name: &str) -> PyResult<Ensemble> {
    name.parse().py()
}

/// Sample `index` of the stream seeded by `seed`; the same pair always gives the same state.
#[pyfunction]
#[pyo3(signature = (dims, seed, index = 0, ensemble = "hs"))]
fn sample_state(
    dims: Vec<usize>,
    seed: u64,
    index: u64,
    ensemble: &str,
) -> PyResult<PyDensityMatrix> {
    let mut rng = verify::substream(seed, index);
    verify::sample_state(parse_ensemble(ensemble)?, &dims, &mut rng)
        .py()
        .map(Into::into)
}

/// Runs a campaign and returns its summary; with `output` set, also writes the JSONL records
/// and summary file there.
#[pyfunction]
#[pyo3(signature = (dims, samples, seed, ensemble = "hs", workers = 0, injections = 0, structural = false, output = None))]
#[allow(clippy::too_many_arguments)]
fn run_campaign<'py>(
    py: Python<'py>,
    dims: Vec<usize>,
    samples: u64,
    seed: u64,
    ensemble: &str,
    workers: usize,
    injections: u64,
    structural: bool,
    output: Option<PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut config = SamplerConfig::new(&dims, parse_ensemble(ensemble)?, samples, seed);
    config.workers = workers;
    config.extremal_injections = injections;
    config.structural = structural;
    let report = py
        .detach(|| verify::run_campaign(&config, output.as_deref()))
        .py()?;
    let summary = to_dict(py, &report)?;
    summary
        .cast::<PyDict>()?
        .set_item("wall_time", report.wall_time.as_secs_f64())?;
    Ok(summary)
}

/// Deterministic identity checks for the given `(d_a, d_b)` pairs.
#[pyfunction]
fn identity_suite<'py>(py: Python<'py>, pairs: Vec<(usize, usize)>) -> PyResult<Bound<'py, PyAny>> {
    let pairs = pairs
        .into_iter()
        .map(|(a, b)| dims(a, b))
        .collect::<PyResult<Vec<_>>>()?;
    let report = py.detach(|| verify::identity_suite(&pairs)).py()?;
    to_dict(py, &report)
}

#[pymodule]
#[pyo3(name = "linentropy")]
pub fn linentropy_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_function(wrap_pyfunction!(sharp_f, m)?)?;
    m.add_function(wrap_pyfunction!(isa_h, m)?)?;
    m.add_function(wrap_pyfunction!(dssa_g, m)?)?;
    m.add_function(wrap_pyfunction!(dssa_restriction_r, m)?)?;
    m.add_function(wrap_pyfunction!(classic_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(audenaert_bound, m)?)?;
    m.add_function(wrap_pyfunction!(appel_bound, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_f, m)?)?;
    m.add_function(wrap_pyfunction!(purity_f, m)?)?;
    m.add_function(wrap_pyfunction!(inverted_lower_f, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_point, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_all, m)?)?;
    m.add_function(wrap_pyfunction!(isa_family, m)?)?;
    m.add_function(wrap_pyfunction!(dssa_family, m)?)?;
    m.add_function(wrap_pyfunction!(mix_with_maximally_mixed, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_state_for, m)?)?;
    m.add_function(wrap_pyfunction!(sample_state, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    m.add_function(wrap_pyfunction!(identity_suite, m)?)?;
    Ok(())
}
