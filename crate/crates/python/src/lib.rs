//! Python bindings for `spinstar`.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spinstar::dynamics::TimeGrid;
use spinstar::measures::{self, SimulationResult, DEFAULT_THRESHOLD, REVIVAL_PROMINENCE};
use spinstar::model::ModelConfig;
use spinstar::operators::DenseOperator;
use spinstar::runner::{self, Preset, Sweep};
use spinstar::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::InvariantBreach { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Parameters of one spin-star experiment.
#[pyclass(name = "ModelConfig", from_py_object)]
#[derive(Clone)]
struct PyModelConfig {
    #[pyo3(get, set)]
    ambient_count: usize,
    #[pyo3(get, set)]
    coupling: String,
    #[pyo3(get, set)]
    j: f64,
    #[pyo3(get, set)]
    omega: f64,
    #[pyo3(get, set)]
    gamma: f64,
    #[pyo3(get, set)]
    gamma_phi: f64,
    #[pyo3(get, set)]
    ambient_state: String,
    #[pyo3(get, set)]
    beta: f64,
    #[pyo3(get, set)]
    decay_jump: String,
}

impl From<ModelConfig> for PyModelConfig {
    fn from(c: ModelConfig) -> Self {
        Self {
            ambient_count: c.ambient_count,
            coupling: c.coupling.to_string(),
            j: c.j,
            omega: c.omega,
            gamma: c.gamma,
            gamma_phi: c.gamma_phi,
            ambient_state: c.ambient_state.to_string(),
            beta: c.beta,
            decay_jump: c.decay_jump.to_string(),
        }
    }
}

impl PyModelConfig {
    fn to_model(&self) -> PyResult<ModelConfig> {
        let cfg = ModelConfig {
            ambient_count: self.ambient_count,
            coupling: self.coupling.parse().map_err(py_err)?,
            j: self.j,
            omega: self.omega,
            gamma: self.gamma,
            gamma_phi: self.gamma_phi,
            ambient_state: self.ambient_state.parse().map_err(py_err)?,
            beta: self.beta,
            decay_jump: self.decay_jump.parse().map_err(py_err)?,
        };
        cfg.validate().map_err(py_err)?;
        Ok(cfg)
    }
}

#[pymethods]
impl PyModelConfig {
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, pyo3::types::PyDict>>) -> PyResult<Self> {
        let mut cfg = Self::from(ModelConfig::default());
        let Some(kwargs) = kwargs else {
            return Ok(cfg);
        };
        for (key, value) in kwargs.iter() {
            let key: String = key.extract()?;
            match key.as_str() {
                "ambient_count" => cfg.ambient_count = value.extract()?,
                "coupling" => cfg.coupling = value.extract()?,
                "j" => cfg.j = value.extract()?,
                "omega" => cfg.omega = value.extract()?,
                "gamma" => cfg.gamma = value.extract()?,
                "gamma_phi" => cfg.gamma_phi = value.extract()?,
                "ambient_state" => cfg.ambient_state = value.extract()?,
                "beta" => cfg.beta = value.extract()?,
                "decay_jump" => cfg.decay_jump = value.extract()?,
                other => {
                    return Err(PyValueError::new_err(format!("unknown parameter '{other}'")))
                }
            }
        }
        cfg.to_model()?;
        Ok(cfg)
    }

    /// Raises `ValueError` if the parameters are out of range.
    fn validate(&self) -> PyResult<()> {
        self.to_model().map(|_| ())
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelConfig(ambient_count={}, coupling='{}', j={}, omega={}, gamma={}, gamma_phi={}, ambient_state='{}', beta={}, decay_jump='{}')",
            self.ambient_count,
            self.coupling,
            self.j,
            self.omega,
            self.gamma,
            self.gamma_phi,
            self.ambient_state,
            self.beta,
            self.decay_jump
        )
    }
}

/// Integration horizon, step and sampling stride.
#[pyclass(name = "TimeGrid", from_py_object)]
#[derive(Clone)]
struct PyTimeGrid {
    #[pyo3(get, set)]
    t_max: f64,
    #[pyo3(get, set)]
    dt: f64,
    #[pyo3(get, set)]
    sample_stride: usize,
}

impl PyTimeGrid {
    fn to_grid(&self) -> PyResult<TimeGrid> {
        TimeGrid::new(self.t_max, self.dt, self.sample_stride).map_err(py_err)
    }
}

impl From<TimeGrid> for PyTimeGrid {
    fn from(g: TimeGrid) -> Self {
        Self {
            t_max: g.t_max,
            dt: g.dt,
            sample_stride: g.sample_stride,
        }
    }
}

#[pymethods]
impl PyTimeGrid {
    #[new]
    #[pyo3(signature = (t_max = 200.0, dt = 0.01, sample_stride = 10))]
    fn new(t_max: f64, dt: f64, sample_stride: usize) -> PyResult<Self> {
        TimeGrid::new(t_max, dt, sample_stride)
            .map(Self::from)
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "TimeGrid(t_max={}, dt={}, sample_stride={})",
            self.t_max, self.dt, self.sample_stride
        )
    }
}

/// Sampled central-spin trajectory.
#[pyclass(name = "SimulationResult", frozen)]
struct PySimulationResult {
    inner: SimulationResult,
}

impl PySimulationResult {
    fn column(&self, f: impl Fn(&measures::CoherenceSample) -> f64) -> Vec<f64> {
        self.inner.samples.iter().map(f).collect()
    }
}

#[pymethods]
impl PySimulationResult {
    #[getter]
    fn config(&self) -> PyModelConfig {
        self.inner.config.into()
    }

    #[getter]
    fn grid(&self) -> PyTimeGrid {
        self.inner.grid.into()
    }

    #[getter]
    fn t(&self) -> Vec<f64> {
        self.column(|s| s.t)
    }

    #[getter]
    fn sx(&self) -> Vec<f64> {
        self.column(|s| s.sx)
    }

    #[getter]
    fn l1(&self) -> Vec<f64> {
        self.column(|s| s.l1)
    }

    #[getter]
    fn trace_dev(&self) -> Vec<f64> {
        self.column(|s| s.trace_dev)
    }

    #[getter]
    fn purity(&self) -> Vec<f64> {
        self.column(|s| s.purity)
    }

    /// First time the `l1` envelope falls below `threshold` times its initial
    /// value, or `None`.
    #[pyo3(signature = (threshold = DEFAULT_THRESHOLD))]
    fn coherence_time(&self, threshold: f64) -> PyResult<Option<f64>> {
        measures::coherence_time(&self.inner.samples, threshold).map_err(py_err)
    }

    fn revivals(&self) -> usize {
        self.inner.revivals()
    }

    fn __len__(&self) -> usize {
        self.inner.samples.len()
    }
}

fn grid_or_default(grid: Option<&PyTimeGrid>, fallback: TimeGrid) -> PyResult<TimeGrid> {
    grid.map_or(Ok(fallback), PyTimeGrid::to_grid)
}

/// Evolves one configuration and returns its sampled trajectory.
#[pyfunction]
#[pyo3(signature = (config, grid = None))]
fn run_single(
    py: Python<'_>,
    config: &PyModelConfig,
    grid: Option<&PyTimeGrid>,
) -> PyResult<PySimulationResult> {
    let cfg = config.to_model()?;
    let grid = grid_or_default(grid, TimeGrid::default())?;
    let inner = py
        .detach(|| runner::run_single(&cfg, &grid))
        .map_err(py_err)?;
    Ok(PySimulationResult { inner })
}

fn sweep_to_py(sweep: Sweep) -> (Vec<PySimulationResult>, Vec<PathBuf>) {
    let results = sweep
        .results
        .into_iter()
        .map(|inner| PySimulationResult { inner })
        .collect();
    (results, sweep.files)
}

/// Runs `config` for each ambient count and writes the CSV files into
/// `out_dir`. Returns the results and the written paths.
#[pyfunction]
#[pyo3(signature = (config, ambient_counts, out_dir, grid = None, prefix = "sweep"))]
fn run_sweep(
    py: Python<'_>,
    config: &PyModelConfig,
    ambient_counts: Vec<usize>,
    out_dir: PathBuf,
    grid: Option<&PyTimeGrid>,
    prefix: &str,
) -> PyResult<(Vec<PySimulationResult>, Vec<PathBuf>)> {
    let cfg = config.to_model()?;
    let grid = grid_or_default(grid, TimeGrid::default())?;
    let sweep = py
        .detach(|| runner::run_sweep(&cfg, &ambient_counts, &grid, &out_dir, prefix))
        .map_err(py_err)?;
    Ok(sweep_to_py(sweep))
}

/// Names of the built-in figure presets.
#[pyfunction]
fn presets() -> Vec<&'static str> {
    Preset::ALL.iter().map(|p| p.name()).collect()
}

/// Base configuration and ambient counts of a preset.
#[pyfunction]
fn preset_config(name: &str) -> PyResult<(PyModelConfig, Vec<usize>)> {
    let preset: Preset = name.parse().map_err(py_err)?;
    Ok((
        preset.base_config().into(),
        preset.ambient_counts().to_vec(),
    ))
}

/// Runs a figure preset and writes its CSV files into `out_dir`.
#[pyfunction]
#[pyo3(signature = (name, out_dir, grid = None))]
fn run_preset(
    py: Python<'_>,
    name: &str,
    out_dir: PathBuf,
    grid: Option<&PyTimeGrid>,
) -> PyResult<(Vec<PySimulationResult>, Vec<PathBuf>)> {
    let preset: Preset = name.parse().map_err(py_err)?;
    let grid = grid.map(PyTimeGrid::to_grid).transpose()?;
    let sweep = py
        .detach(|| runner::run_preset(preset, grid.as_ref(), &out_dir))
        .map_err(py_err)?;
    Ok(sweep_to_py(sweep))
}

fn to_operator(rows: Vec<Vec<Complex64>>) -> PyResult<DenseOperator> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    DenseOperator::from_vec(dim, rows.concat()).map_err(py_err)
}

fn from_operator(op: &DenseOperator) -> Vec<Vec<Complex64>> {
    (0..op.dim()).map(|r| op.row(r).to_vec()).collect()
}

/// Traces out the ambient spins of a full density matrix, given as nested
/// lists of complex numbers. The central spin is the most significant qubit.
#[pyfunction]
fn partial_trace_to_central(
    rho: Vec<Vec<Complex64>>,
    ambient_count: usize,
) -> PyResult<Vec<Vec<Complex64>>> {
    let rho = to_operator(rho)?;
    measures::partial_trace_to_central(&rho, ambient_count)
        .map(|r| from_operator(&r))
        .map_err(py_err)
}

/// Sum of the absolute off-diagonal entries.
#[pyfunction]
fn l1_coherence(rho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    Ok(measures::l1_coherence(&to_operator(rho)?))
}

/// `tr(σx ρ)` of a single-qubit state.
#[pyfunction]
fn expect_sigma_x(rho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    measures::expect_sigma_x(&to_operator(rho)?).map_err(py_err)
}

/// Number of local maxima of `values` with at least `min_prominence`.
#[pyfunction]
#[pyo3(signature = (values, min_prominence = REVIVAL_PROMINENCE))]
fn count_revivals(values: Vec<f64>, min_prominence: f64) -> usize {
    measures::count_revivals(&values, min_prominence)
}

#[pymodule]
fn spinstar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelConfig>()?;
    m.add_class::<PyTimeGrid>()?;
    m.add_class::<PySimulationResult>()?;
    m.add_function(wrap_pyfunction!(run_single, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(preset_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_preset, m)?)?;
    m.add_function(wrap_pyfunction!(partial_trace_to_central, m)?)?;
    m.add_function(wrap_pyfunction!(l1_coherence, m)?)?;
    m.add_function(wrap_pyfunction!(expect_sigma_x, m)?)?;
    m.add_function(wrap_pyfunction!(count_revivals, m)?)?;
    m.add("DEFAULT_THRESHOLD", DEFAULT_THRESHOLD)?;
    Ok(())
}
