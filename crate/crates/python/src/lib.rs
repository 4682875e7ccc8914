//! Python module `adcsim`.

use adc_core::analytic::{
    self, evolved_density_matrix, evolved_params, photon_dist, photon_dist_adaptive, tomogram_analytic, wigner_analytic,
};
use adc_core::channel;
use adc_core::fock::{self, squeezed_vacuum_with_max_tail, tomogram_numeric, wigner_numeric};
use adc_core::{Complex64, FockDensityMatrix, QuadratureFrame};
use adc_sim::{CliError, CommandKind, RunConfig};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn core_err(e: adc_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn frame(f: f64, g: f64) -> PyResult<QuadratureFrame> {
    QuadratureFrame::new(f, g).map_err(core_err)
}

/// A point (λ, κt) of the evolution.
#[pyclass(name = "ChannelPoint", frozen, from_py_object, module = "adcsim")]
#[derive(Clone, Copy)]
struct PyChannelPoint(analytic::ChannelPoint);

#[pymethods]
impl PyChannelPoint {
    #[new]
    fn new(lambda_: f64, kappa_t: f64) -> PyResult<Self> {
        analytic::ChannelPoint::new(lambda_, kappa_t).map(Self).map_err(core_err)
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.0.lambda()
    }

    #[getter]
    fn kappa_t(&self) -> f64 {
        self.0.kappa_t()
    }

    /// Evolved parameters as a dict with keys t_prime, beta_s, w, g.
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let ep = evolved_params(self.0);
        let d = PyDict::new(py);
        d.set_item("t_prime", ep.t_prime)?;
        d.set_item("beta_s", ep.beta_s)?;
        d.set_item("w", ep.w)?;
        d.set_item("g", ep.g)?;
        Ok(d)
    }

    fn mean_photon(&self) -> f64 {
        analytic::mean_photon(self.0)
    }

    /// p(0..=n_max); without n_max, enough terms that the neglected mass is below max_tail.
    #[pyo3(signature = (n_max=None, max_tail=1e-12))]
    fn photon_dist(&self, n_max: Option<usize>, max_tail: f64) -> Vec<f64> {
        match n_max {
            Some(n) => photon_dist(self.0, n).probs,
            None => photon_dist_adaptive(self.0, max_tail).probs,
        }
    }

    fn density_matrix(&self, cutoff: usize) -> PyResult<DensityMatrix> {
        evolved_density_matrix(self.0, cutoff).map(DensityMatrix).map_err(core_err)
    }

    /// Wigner function, integral 1/2 convention.
    fn wigner(&self, alpha: Complex64) -> f64 {
        wigner_analytic(alpha, self.0)
    }

    #[pyo3(signature = (q, f=1.0, g=0.0))]
    fn tomogram(&self, q: f64, f: f64, g: f64) -> PyResult<f64> {
        tomogram_analytic(q, &frame(f, g)?, self.0).map_err(core_err)
    }

    fn __repr__(&self) -> String {
        format!("ChannelPoint(lambda_={}, kappa_t={})", self.0.lambda(), self.0.kappa_t())
    }
}

/// Truncated Fock-space density matrix.
#[pyclass(frozen, module = "adcsim")]
struct DensityMatrix(FockDensityMatrix);

#[pymethods]
impl DensityMatrix {
    #[getter]
    fn cutoff(&self) -> usize {
        self.0.cutoff()
    }

    #[getter]
    fn tail(&self) -> f64 {
        self.0.tail()
    }

    fn trace(&self) -> f64 {
        self.0.trace()
    }

    fn diagonal(&self) -> Vec<f64> {
        self.0.diagonal()
    }

    fn element(&self, m: usize, n: usize) -> PyResult<Complex64> {
        if m > self.0.cutoff() || n > self.0.cutoff() {
            return Err(PyValueError::new_err(format!("index ({m}, {n}) outside cutoff {}", self.0.cutoff())));
        }
        Ok(self.0.get(m, n))
    }

    /// Rows as lists of complex numbers.
    fn to_list(&self) -> Vec<Vec<Complex64>> {
        let m = self.0.matrix();
        m.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    fn min_eigenvalue(&self) -> f64 {
        self.0.min_eigenvalue()
    }

    fn mean_photon(&self) -> f64 {
        fock::expect_number(&self.0)
    }

    fn max_abs_diff(&self, other: &DensityMatrix) -> PyResult<f64> {
        if other.0.cutoff() != self.0.cutoff() {
            return Err(PyValueError::new_err("cutoffs differ"));
        }
        Ok(self.0.max_abs_diff(&other.0))
    }

    fn leading_block(&self, cutoff: usize) -> PyResult<DensityMatrix> {
        self.0.leading_block(cutoff).map(DensityMatrix).map_err(core_err)
    }

    /// Kraus evolution by κt.
    fn apply_channel(&self, py: Python<'_>, kappa_t: f64) -> PyResult<DensityMatrix> {
        py.detach(|| channel::apply_channel(&self.0, kappa_t)).map(DensityMatrix).map_err(core_err)
    }

    #[pyo3(signature = (kappa_t, dt=1e-3))]
    fn lindblad_rk4(&self, py: Python<'_>, kappa_t: f64, dt: f64) -> PyResult<DensityMatrix> {
        py.detach(|| channel::lindblad_rk4(&self.0, kappa_t, dt)).map(DensityMatrix).map_err(core_err)
    }

    fn wigner(&self, py: Python<'_>, alpha: Complex64) -> PyResult<f64> {
        py.detach(|| wigner_numeric(&self.0, alpha)).map_err(core_err)
    }

    #[pyo3(signature = (q, f=1.0, g=0.0))]
    fn tomogram(&self, q: f64, f: f64, g: f64) -> PyResult<f64> {
        tomogram_numeric(&self.0, q, &frame(f, g)?).map_err(core_err)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(cutoff={}, trace={}, tail={:e})", self.0.cutoff(), self.0.trace(), self.0.tail())
    }
}

/// Squeezed vacuum truncated at `cutoff`; fails if the neglected mass exceeds max_tail.
#[pyfunction]
#[pyo3(signature = (lambda_, cutoff, max_tail=fock::DEFAULT_MAX_TAIL))]
fn squeezed_vacuum(lambda_: f64, cutoff: usize, max_tail: f64) -> PyResult<DensityMatrix> {
    squeezed_vacuum_with_max_tail(lambda_, cutoff, max_tail).map(DensityMatrix).map_err(core_err)
}

#[pyfunction]
fn apply_channel(py: Python<'_>, rho: &DensityMatrix, kappa_t: f64) -> PyResult<DensityMatrix> {
    rho.apply_channel(py, kappa_t)
}

#[pyfunction]
fn mean_photon(lambda_: f64, kappa_t: f64) -> PyResult<f64> {
    Ok(PyChannelPoint::new(lambda_, kappa_t)?.mean_photon())
}

#[pyfunction]
#[pyo3(signature = (lambda_, kappa_t, n_max=None))]
fn photon_distribution(lambda_: f64, kappa_t: f64, n_max: Option<usize>) -> PyResult<Vec<f64>> {
    Ok(PyChannelPoint::new(lambda_, kappa_t)?.photon_dist(n_max, fock::ADAPTIVE_TAIL))
}

#[pyfunction]
fn wigner(alpha: Complex64, lambda_: f64, kappa_t: f64) -> PyResult<f64> {
    Ok(PyChannelPoint::new(lambda_, kappa_t)?.wigner(alpha))
}

#[pyfunction]
#[pyo3(signature = (q, lambda_, kappa_t, f=1.0, g=0.0))]
fn tomogram(q: f64, lambda_: f64, kappa_t: f64, f: f64, g: f64) -> PyResult<f64> {
    PyChannelPoint::new(lambda_, kappa_t)?.tomogram(q, f, g)
}

/// Runs the validation suite and returns the report as a dict (schema "adc-validate/1").
#[pyfunction]
#[pyo3(signature = (lambdas=None, kappa_ts=None, cutoff=None, tol=None))]
fn validate<'py>(
    py: Python<'py>,
    lambdas: Option<Vec<f64>>,
    kappa_ts: Option<Vec<f64>>,
    cutoff: Option<usize>,
    tol: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let defaults = RunConfig::default();
    let cfg = RunConfig {
        command: CommandKind::Validate,
        lambdas: lambdas.unwrap_or(defaults.lambdas.clone()),
        kappa_ts: kappa_ts.unwrap_or(defaults.kappa_ts.clone()),
        cutoff,
        tol: tol.unwrap_or(defaults.tol),
        ..defaults
    };
    let report = py.detach(|| adc_sim::validate::run_validate(&cfg)).map_err(|e| match e {
        CliError::Usage(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    })?;
    py.import("json")?.call_method1("loads", (report.to_json(),))
}

#[pymodule]
pub fn adcsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannelPoint>()?;
    m.add_class::<DensityMatrix>()?;
    m.add_function(wrap_pyfunction!(squeezed_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(apply_channel, m)?)?;
    m.add_function(wrap_pyfunction!(mean_photon, m)?)?;
    m.add_function(wrap_pyfunction!(photon_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(wigner, m)?)?;
    m.add_function(wrap_pyfunction!(tomogram, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
