//! Python bindings: problems, policies, episodes, experiments and theory.

use std::path::PathBuf;
use std::sync::Arc;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sbandit_core::harness::{self, Checkpoints, ExperimentConfig, SweepConfig};
use sbandit_core::problem::catalog::make_builtin;
use sbandit_core::problem::config::{load_problem, parse_problem};
use sbandit_core::problem::DEFAULT_RESOLUTION;
use sbandit_core::theory::{self, BoundInputs, EpsilonOutcome, ThetaClass};
use sbandit_core::{ArmStatistics, Environment, Error, PolicySpec, SetMode, StructuredBandit, Theta};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Parameter from a float, a list of floats, or a label name.
#[derive(FromPyObject)]
enum ThetaArg {
    Real(f64),
    Vector(Vec<f64>),
    Label(String),
}

fn to_theta(bandit: &StructuredBandit, arg: ThetaArg) -> PyResult<Theta> {
    let theta = match arg {
        ThetaArg::Real(x) => Theta::Real(x),
        ThetaArg::Vector(v) => Theta::Vector(v),
        ThetaArg::Label(name) => match bandit.space().label_index(&name) {
            Some(i) => Theta::Label(i),
            None => return Err(PyValueError::new_err(format!("unknown label `{name}`"))),
        },
    };
    bandit.check_theta(&theta).map_err(py_err)?;
    Ok(theta)
}

fn spec_from(policy: &str, alpha: Option<f64>, mode: &str) -> PyResult<PolicySpec> {
    let mut spec = PolicySpec::parse(policy).map_err(py_err)?;
    if let Some(a) = alpha {
        spec = spec.with_alpha(a).map_err(py_err)?;
    }
    let mode: SetMode = mode.parse().map_err(PyValueError::new_err)?;
    Ok(spec.with_mode(mode))
}

/// A structured bandit problem.
#[pyclass(name = "Bandit", frozen, module = "sbandit")]
struct PyBandit {
    inner: Arc<StructuredBandit>,
}

#[pymethods]
impl PyBandit {
    /// Builtin problem by identifier, e.g. `example-a`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(PyBandit { inner: Arc::new(make_builtin(name).map_err(py_err)?) })
    }

    /// Problem read from a TOML file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyBandit { inner: Arc::new(load_problem(&path).map_err(py_err)?) })
    }

    /// Problem parsed from TOML text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyBandit { inner: Arc::new(parse_problem(text).map_err(py_err)?) })
    }

    /// Unstructured bandit whose parameter is the vector of arm means.
    #[staticmethod]
    #[pyo3(signature = (arms, lower, upper, sigma2 = 1.0))]
    fn unstructured(arms: usize, lower: f64, upper: f64, sigma2: f64) -> PyResult<Self> {
        Ok(PyBandit { inner: Arc::new(StructuredBandit::unstructured(arms, lower, upper, sigma2).map_err(py_err)?) })
    }

    /// Builtin identifiers.
    #[staticmethod]
    fn catalog() -> Vec<&'static str> {
        sbandit_core::problem::catalog::CATALOG.iter().map(|(id, _)| *id).collect()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn arms(&self) -> usize {
        self.inner.arms()
    }

    #[getter]
    fn sigma2(&self) -> f64 {
        self.inner.sigma2()
    }

    /// Equally spaced points of an interval space.
    #[pyo3(signature = (resolution = DEFAULT_RESOLUTION))]
    fn grid(&self, resolution: usize) -> PyResult<Vec<f64>> {
        self.inner.space().grid_with(resolution).map_err(py_err)
    }

    fn means(&self, theta: ThetaArg) -> PyResult<Vec<f64>> {
        let t = to_theta(&self.inner, theta)?;
        self.inner.means_at(&t).map_err(py_err)
    }

    fn optimal_arm(&self, theta: ThetaArg) -> PyResult<usize> {
        let t = to_theta(&self.inner, theta)?;
        self.inner.optimal_arm(&t).map_err(py_err)
    }

    /// Gaps, optimal arm and extreme gaps as a dict.
    fn gap_profile<'py>(&self, py: Python<'py>, theta: ThetaArg) -> PyResult<Bound<'py, PyDict>> {
        let t = to_theta(&self.inner, theta)?;
        let g = self.inner.gap_profile(&t).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("optimal_arm", g.optimal_arm)?;
        d.set_item("optimal_mean", g.optimal_mean)?;
        d.set_item("gaps", g.gaps)?;
        d.set_item("delta_min", g.delta_min)?;
        d.set_item("delta_max", g.delta_max)?;
        Ok(d)
    }

    /// `(label, value)`: the finite-regret margin for easy parameters and
    /// the witness for hard ones, `None` otherwise.
    fn classify(&self, theta: ThetaArg) -> PyResult<(&'static str, Option<f64>)> {
        let t = to_theta(&self.inner, theta)?;
        let class = theory::classify_parameter(&self.inner, &t).map_err(py_err)?;
        let value = match class {
            ThetaClass::Easy { epsilon } => Some(epsilon),
            ThetaClass::Hard { witness: Theta::Real(x) } => Some(x),
            ThetaClass::Hard { .. } => None,
            ThetaClass::Ambiguous => None,
        };
        Ok((class.label(), value))
    }

    /// Finite-regret margin, or `None` when no margin exists.
    fn finite_regret_epsilon(&self, theta: ThetaArg) -> PyResult<Option<f64>> {
        let t = to_theta(&self.inner, theta)?;
        Ok(theory::finite_regret_epsilon(&self.inner, &t, DEFAULT_RESOLUTION).map_err(py_err)?.value())
    }

    fn __repr__(&self) -> String {
        format!("Bandit(name={:?}, arms={})", self.inner.name(), self.inner.arms())
    }
}

/// Per-arm pull counts and empirical means.
#[pyclass(name = "Stats", module = "sbandit")]
struct PyStats {
    inner: ArmStatistics,
}

#[pymethods]
impl PyStats {
    #[new]
    fn new(arms: usize) -> Self {
        PyStats { inner: ArmStatistics::new(arms) }
    }

    fn record(&mut self, arm: usize, reward: f64) -> PyResult<()> {
        if arm >= self.inner.arms() {
            return Err(py_err(Error::ArmOutOfRange { arm, arms: self.inner.arms() }));
        }
        self.inner.record(arm, reward);
        Ok(())
    }

    #[getter]
    fn steps(&self) -> u64 {
        self.inner.steps()
    }

    #[getter]
    fn pulls(&self) -> Vec<u64> {
        self.inner.all_pulls().to_vec()
    }

    #[getter]
    fn means(&self) -> Vec<f64> {
        self.inner.means().to_vec()
    }
}

/// Reward process for one episode.
#[pyclass(name = "Environment", module = "sbandit")]
struct PyEnvironment {
    inner: Environment,
}

#[pymethods]
impl PyEnvironment {
    #[new]
    #[pyo3(signature = (bandit, theta, seed = 0, stream = 0))]
    fn new(bandit: &PyBandit, theta: ThetaArg, seed: u64, stream: u64) -> PyResult<Self> {
        let t = to_theta(&bandit.inner, theta)?;
        Ok(PyEnvironment { inner: Environment::new(Arc::clone(&bandit.inner), t, seed, stream).map_err(py_err)? })
    }

    #[getter]
    fn true_means(&self) -> Vec<f64> {
        self.inner.true_means().to_vec()
    }

    /// Draw a reward from `arm` and record it in `stats`.
    fn sample(&mut self, arm: usize, stats: &mut PyStats) -> PyResult<f64> {
        self.inner.sample_reward(arm, &mut stats.inner).map_err(py_err)
    }
}

/// A bandit policy bound to one problem.
#[pyclass(name = "Policy", module = "sbandit")]
struct PyPolicy {
    bandit: Arc<StructuredBandit>,
    inner: sbandit_core::Policy,
}

#[pymethods]
impl PyPolicy {
    /// `policy` is an identifier such as `ucbs` or `ucb:2`.
    #[new]
    #[pyo3(signature = (bandit, policy, alpha = None, mode = "exact"))]
    fn new(bandit: &PyBandit, policy: &str, alpha: Option<f64>, mode: &str) -> PyResult<Self> {
        let spec = spec_from(policy, alpha, mode)?;
        let inner = spec.build(&bandit.inner).map_err(py_err)?;
        Ok(PyPolicy { bandit: Arc::clone(&bandit.inner), inner })
    }

    #[getter]
    fn spec(&self) -> String {
        self.inner.spec().to_string()
    }

    /// Arm to pull at step `stats.steps + 1`.
    fn select(&mut self, stats: &PyStats) -> PyResult<usize> {
        self.inner.select(&self.bandit, &stats.inner).map_err(py_err)
    }

    fn observe(&mut self, arm: usize, reward: f64) {
        self.inner.observe(arm, reward)
    }
}

#[pyfunction]
fn omega(x: f64) -> PyResult<u64> {
    theory::omega(x).map_err(py_err)
}

#[pyfunction]
fn omega2(x: f64) -> PyResult<u64> {
    theory::omega2(x).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (epsilon, delta_min, alpha = 4.0, arms = 2, sigma2 = 1.0))]
fn omega_star(epsilon: f64, delta_min: f64, alpha: f64, arms: usize, sigma2: f64) -> PyResult<u64> {
    theory::omega_star(epsilon, delta_min, alpha, arms, sigma2).map_err(py_err)
}

/// Logarithmic regret bound for UCB-S at `theta` and horizon `n`.
#[pyfunction]
#[pyo3(signature = (bandit, theta, n, alpha = 4.0))]
fn log_regret_bound(bandit: &PyBandit, theta: ThetaArg, n: u64, alpha: f64) -> PyResult<f64> {
    let b = &bandit.inner;
    let gaps = b.gap_profile(&to_theta(b, theta)?).map_err(py_err)?;
    theory::theorem1_bound(&BoundInputs::new(gaps, n, alpha, b.sigma2())).map_err(py_err)
}

/// Horizon-free regret bound for UCB-S at `theta`; the margin defaults to
/// the finite-regret margin of the parameter.
#[pyfunction]
#[pyo3(signature = (bandit, theta, epsilon = None))]
fn finite_regret_bound(bandit: &PyBandit, theta: ThetaArg, epsilon: Option<f64>) -> PyResult<f64> {
    let b = &bandit.inner;
    let t = to_theta(b, theta)?;
    let gaps = b.gap_profile(&t).map_err(py_err)?;
    let Some(delta_min) = gaps.delta_min else { return Ok(0.0) };
    let epsilon = match epsilon {
        Some(e) => e,
        None => match theory::finite_regret_epsilon(b, &t, DEFAULT_RESOLUTION).map_err(py_err)? {
            EpsilonOutcome::Found(e) => e,
            _ => return Err(PyValueError::new_err("no finite-regret margin exists at this parameter")),
        },
    };
    let w = theory::omega_star(epsilon, delta_min, 4.0, b.arms(), b.sigma2()).map_err(py_err)?;
    Ok(theory::theorem2_bound(&gaps, w, b.sigma2(), b.arms()))
}

/// Mean pseudo-regret curve over `reps` independent episodes.
#[pyfunction]
#[pyo3(signature = (bandit, policy, theta, horizon, reps = 100, seed = 1, workers = 0, checkpoints = None, alpha = None, mode = "exact"))]
#[allow(clippy::too_many_arguments)]
fn run_experiment<'py>(
    py: Python<'py>,
    bandit: &PyBandit,
    policy: &str,
    theta: ThetaArg,
    horizon: u64,
    reps: usize,
    seed: u64,
    workers: usize,
    checkpoints: Option<Vec<u64>>,
    alpha: Option<f64>,
    mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = spec_from(policy, alpha, mode)?;
    let t = to_theta(&bandit.inner, theta)?;
    let mut cfg =
        ExperimentConfig::new((*bandit.inner).clone(), spec, t, horizon).reps(reps).seed(seed).workers(workers);
    if let Some(cps) = checkpoints {
        cfg = cfg.checkpoints(Checkpoints::Explicit(cps));
    }
    let curve = py.detach(|| harness::run_experiment(&cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("policy", curve.policy.to_string())?;
    d.set_item("checkpoints", &curve.checkpoints)?;
    d.set_item("mean", &curve.mean)?;
    d.set_item("std_error", &curve.std_error)?;
    d.set_item("per_rep", &curve.per_rep)?;
    Ok(d)
}

/// Terminal mean regret of each policy over a sweep of the true parameter.
#[pyfunction]
#[pyo3(signature = (bandit, policies, theta_min, theta_max, steps, horizon, reps = 100, seed = 1, workers = 0))]
#[allow(clippy::too_many_arguments)]
fn run_sweep<'py>(
    py: Python<'py>,
    bandit: &PyBandit,
    policies: Vec<String>,
    theta_min: f64,
    theta_max: f64,
    steps: usize,
    horizon: u64,
    reps: usize,
    seed: u64,
    workers: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let policies = policies.iter().map(|p| PolicySpec::parse(p).map_err(py_err)).collect::<PyResult<Vec<_>>>()?;
    let cfg = SweepConfig {
        bandit: Arc::clone(&bandit.inner),
        policies,
        theta_min,
        theta_max,
        theta_steps: steps,
        horizon,
        reps,
        seed,
        workers,
    };
    let r = py.detach(|| harness::run_sweep(&cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("thetas", &r.thetas)?;
    d.set_item("policies", r.policies.iter().map(|p| p.to_string()).collect::<Vec<_>>())?;
    d.set_item("mean", &r.mean)?;
    d.set_item("std_error", &r.std_error)?;
    Ok(d)
}

/// Empirical frequency of `|mean - mu| >= epsilon` over `n` Gaussian
/// samples, with the two-sided tail bound.
#[pyfunction]
#[pyo3(signature = (epsilon, n, sigma2 = 1.0, trials = 100_000, seed = 1, workers = 0))]
fn concentration_test(
    py: Python<'_>,
    epsilon: f64,
    n: u64,
    sigma2: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> PyResult<(f64, f64)> {
    let r = py.detach(|| harness::concentration_test(epsilon, n, sigma2, trials, seed, workers)).map_err(py_err)?;
    Ok((r.frequency, r.bound))
}

#[pymodule]
fn sbandit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBandit>()?;
    m.add_class::<PyStats>()?;
    m.add_class::<PyEnvironment>()?;
    m.add_class::<PyPolicy>()?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(omega2, m)?)?;
    m.add_function(wrap_pyfunction!(omega_star, m)?)?;
    m.add_function(wrap_pyfunction!(log_regret_bound, m)?)?;
    m.add_function(wrap_pyfunction!(finite_regret_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(concentration_test, m)?)?;
    Ok(())
}
