use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fran_core::analytic;
use fran_core::experiments::{self, FigureId, Mode, SweepSpec};
use fran_core::montecarlo::{self, Policy};
use fran_core::numerics::{self, QuadratureSpec};
use fran_core::{Error, Estimate, ScenarioSpec};

create_exception!(fran_tradeoff, UnstableQueueError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::Parse(_) | Error::Domain { .. } | Error::Sweep(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Unstable { .. } => UnstableQueueError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Validated scenario.
#[pyclass(name = "Scenario", module = "fran_tradeoff", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: fran_core::Scenario,
}

#[pymethods]
impl PyScenario {
    /// Reference parameters, optionally overridden by TOML text.
    #[new]
    #[pyo3(signature = (toml = None))]
    fn new(toml: Option<&str>) -> PyResult<Self> {
        let spec = match toml {
            Some(t) => ScenarioSpec::from_toml_str(t).map_err(to_py)?,
            None => ScenarioSpec::reference(),
        };
        let inner = spec.validate().map_err(|e| to_py(Error::Config(e)))?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let spec = ScenarioSpec::from_file(path).map_err(to_py)?;
        let inner = spec.validate().map_err(|e| to_py(Error::Config(e)))?;
        Ok(Self { inner })
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.k()
    }

    #[getter]
    fn hit_probability(&self) -> f64 {
        self.inner.hit_probability()
    }

    #[getter]
    fn density_ratio(&self) -> f64 {
        self.inner.network().density_ratio()
    }

    #[getter]
    fn lambda_f(&self) -> f64 {
        self.inner.network().lambda_f
    }

    #[getter]
    fn lambda_r(&self) -> f64 {
        self.inner.network().lambda_r
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.network().alpha
    }

    /// Copy with λ_F set so that λ_R/λ_F equals `ratio`.
    fn with_density_ratio(&self, ratio: f64) -> PyResult<Self> {
        let lr = self.inner.network().lambda_r;
        let inner = self
            .inner
            .modified(|s| s.network.lambda_f = lr / ratio)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    fn __repr__(&self) -> String {
        let n = self.inner.network();
        format!(
            "Scenario(lambda_r={}, lambda_f={}, alpha={}, k={:.6}, p_hit={:.6})",
            n.lambda_r,
            n.lambda_f,
            n.alpha,
            self.inner.k(),
            self.inner.hit_probability()
        )
    }
}

/// Every problem found in a TOML scenario; empty when it is valid.
#[pyfunction]
fn validate_toml(toml: &str) -> Vec<String> {
    match ScenarioSpec::from_toml_str(toml) {
        Err(Error::Config(errs)) => errs.iter().map(|v| v.to_string()).collect(),
        Err(e) => vec![e.to_string()],
        Ok(spec) => match spec.validate() {
            Ok(_) => Vec::new(),
            Err(errs) => errs.iter().map(|v| v.to_string()).collect(),
        },
    }
}

#[pyfunction]
fn rho(delta: f64, alpha: f64) -> PyResult<f64> {
    numerics::rho(delta, alpha).map_err(to_py)
}

#[pyfunction]
fn cache_hit_probability(cached: usize, tau: f64, catalog: usize) -> f64 {
    analytic::cache_hit_probability(cached, tau, catalog)
}

#[pyfunction]
fn success_prob_max_rsrp<'py>(py: Python<'py>, scenario: &PyScenario, delta: f64) -> PyResult<Bound<'py, PyDict>> {
    let s = analytic::success_prob_max_rsrp(delta, &scenario.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("total", s.total)?;
    d.set_item("fap", s.fap)?;
    d.set_item("rrh", s.rrh)?;
    d.set_item("a_f", s.a_f)?;
    d.set_item("a_r", s.a_r)?;
    Ok(d)
}

#[pyfunction]
fn ergodic_rate_max_rsrp<'py>(py: Python<'py>, scenario: &PyScenario) -> PyResult<Bound<'py, PyDict>> {
    let r = analytic::ergodic_rate_max_rsrp(&scenario.inner, &QuadratureSpec::default()).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("rate", r.rate)?;
    d.set_item("fap", r.fap.value)?;
    d.set_item("rrh", r.rrh.value)?;
    Ok(d)
}

#[pyfunction]
fn latency_max_rsrp(scenario: &PyScenario) -> PyResult<f64> {
    analytic::avg_delivery_latency_max_rsrp(&scenario.inner, &QuadratureSpec::default())
        .map(|l| l.latency)
        .map_err(to_py)
}

#[pyfunction]
fn latency_min_delay(scenario: &PyScenario) -> PyResult<f64> {
    analytic::avg_delivery_latency_min_delay(&scenario.inner, &QuadratureSpec::default())
        .map(|l| l.latency)
        .map_err(to_py)
}

/// Association probabilities, success terms and thresholds at the
/// minimal-delay equilibrium.
#[pyfunction]
fn min_delay_equilibrium<'py>(py: Python<'py>, scenario: &PyScenario) -> PyResult<Bound<'py, PyDict>> {
    let eq = analytic::solve_min_delay_equilibrium(&scenario.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("assoc", eq.assoc.to_vec())?;
    d.set_item("terms", eq.terms.to_array().to_vec())?;
    d.set_item("success", eq.terms.total())?;
    d.set_item("thresholds", eq.thresholds.to_array().to_vec())?;
    d.set_item("d_front", eq.links.d_front)?;
    d.set_item("d_back", eq.links.d_back)?;
    d.set_item("residual", eq.residual)?;
    Ok(d)
}

fn parse_policy(policy: &str, radius: Option<f64>) -> PyResult<Policy> {
    match (policy, radius) {
        ("max_rsrp" | "maxrsrp", _) => Ok(Policy::MaxRsrp),
        ("min_delay" | "mindelay", _) => Ok(Policy::MinDelay),
        ("cluster", Some(radius)) if radius > 0.0 => Ok(Policy::ClusterMaxCacheHit { radius }),
        ("cluster", _) => Err(PyValueError::new_err("cluster policy needs a positive radius")),
        _ => Err(PyValueError::new_err(format!("unknown policy {policy:?}"))),
    }
}

fn estimate_tuple(e: &Estimate) -> (f64, f64, usize) {
    (e.mean, e.std_error, e.n)
}

/// Monte Carlo metrics as `name -> (mean, std_error, n)`; a metric that is
/// undefined maps to its error message.
#[pyfunction]
#[pyo3(signature = (scenario, policy, realizations, seed, radius = None))]
fn estimate_metrics<'py>(
    py: Python<'py>,
    scenario: &PyScenario,
    policy: &str,
    realizations: usize,
    seed: u64,
    radius: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = parse_policy(policy, radius)?;
    let report = py
        .detach(|| montecarlo::estimate_metrics(&scenario.inner, p, realizations, seed))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    for (name, v) in experiments::mc_metrics(&report, p) {
        match v {
            Ok(e) => d.set_item(name, estimate_tuple(&e))?,
            Err(f) => d.set_item(name, f.message)?,
        }
    }
    Ok(d)
}

/// `(passed, rows)` with one `(metric, analytic, mc, std_error, pass)` row per check.
#[pyfunction]
fn cross_validate(
    py: Python<'_>,
    scenario: &PyScenario,
    policy: &str,
    realizations: usize,
    seed: u64,
) -> PyResult<(bool, Vec<(String, f64, f64, f64, bool)>)> {
    let p = parse_policy(policy, None)?;
    let r = py
        .detach(|| experiments::cross_validate(&scenario.inner, p, realizations, seed))
        .map_err(to_py)?;
    let rows = r
        .checks
        .iter()
        .map(|c| (c.metric.clone(), c.analytic, c.estimate, c.std_error, c.pass || c.low_power))
        .collect();
    Ok((r.passed(), rows))
}

/// Run a figure sweep and return its CSV text.
#[pyfunction]
#[pyo3(signature = (figure, scenario = None, mode = "analytic", realizations = None, seed = None, grid = None))]
fn run_sweep(
    py: Python<'_>,
    figure: &str,
    scenario: Option<&PyScenario>,
    mode: &str,
    realizations: Option<usize>,
    seed: Option<u64>,
    grid: Option<Vec<f64>>,
) -> PyResult<String> {
    let figure: FigureId = figure.parse().map_err(to_py)?;
    let base = scenario.map(|s| s.inner.clone()).unwrap_or_else(fran_core::Scenario::reference);
    let mut spec = SweepSpec::figure(figure, &base).map_err(to_py)?;
    spec.mode = mode.parse::<Mode>().map_err(to_py)?;
    if let Some(n) = realizations {
        spec.realizations = n;
    }
    if let Some(s) = seed {
        spec.seed = s;
    }
    if let Some(g) = grid {
        spec.grid = g;
    }
    let result = py.detach(|| experiments::run_sweep(&spec)).map_err(to_py)?;
    let bytes = result.to_csv().map_err(to_py)?;
    String::from_utf8(bytes).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn fran_tradeoff(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add("UnstableQueueError", m.py().get_type::<UnstableQueueError>())?;
    m.add_function(wrap_pyfunction!(validate_toml, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(cache_hit_probability, m)?)?;
    m.add_function(wrap_pyfunction!(success_prob_max_rsrp, m)?)?;
    m.add_function(wrap_pyfunction!(ergodic_rate_max_rsrp, m)?)?;
    m.add_function(wrap_pyfunction!(latency_max_rsrp, m)?)?;
    m.add_function(wrap_pyfunction!(latency_min_delay, m)?)?;
    m.add_function(wrap_pyfunction!(min_delay_equilibrium, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
