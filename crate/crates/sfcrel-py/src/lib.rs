//! Python bindings for the reliability toolkit: scenario construction,
//! closed-form evaluation, the Monte Carlo / exhaustive oracle, utilization,
//! and the provisioning searches.
//!
//! Build with `cargo build -p sfcrel-py --release`, then import the produced
//! `libsfcrel_py.so` as module `sfcrel_py` (see `python/smoke_test.py` for a
//! self-contained loader).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sfcrel::model::{BackupSpec, ChainSpec, ReliabilityParams, Strategy};

fn parse_strategy(token: &str) -> PyResult<Strategy> {
    Strategy::ALL
        .into_iter()
        .find(|s| s.token() == token)
        .ok_or_else(|| {
            let known: Vec<&str> = Strategy::ALL.iter().map(|s| s.token()).collect();
            PyValueError::new_err(format!(
                "unknown strategy {token:?}; expected one of: {}",
                known.join(", ")
            ))
        })
}

fn violations_to_err(violations: Vec<sfcrel::model::Violation>) -> PyErr {
    PyValueError::new_err(
        violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    )
}

/// A fully specified deployment: placement strategy, chain shape, backup
/// provisioning and component reliabilities.
#[pyclass(name = "Scenario", skip_from_py_object)]
struct PyScenario {
    inner: sfcrel::Scenario,
}

impl PyScenario {
    fn checked(&self) -> PyResult<&sfcrel::Scenario> {
        self.inner.validate().map_err(violations_to_err)?;
        Ok(&self.inner)
    }
}

#[pymethods]
impl PyScenario {
    #[new]
    #[pyo3(signature = (strategy, n=1, psi=1, n_servers=1, psi_split=None, sigma=0, m=0,
                        phi=1.0, phi_r=1.0, upsilon=1.0, upsilon_r=1.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        strategy: &str,
        n: u32,
        psi: u32,
        n_servers: u32,
        psi_split: Option<Vec<u32>>,
        sigma: u32,
        m: u32,
        phi: f64,
        phi_r: f64,
        upsilon: f64,
        upsilon_r: f64,
    ) -> PyResult<Self> {
        let strategy = parse_strategy(strategy)?;
        let chain = match psi_split {
            Some(split) => ChainSpec::new(n, psi, split),
            None => ChainSpec::with_even_split(n, psi, n_servers),
        };
        Ok(PyScenario {
            inner: sfcrel::Scenario::new(
                strategy,
                ReliabilityParams::new(phi, phi_r, upsilon, upsilon_r),
                chain,
                BackupSpec::new(sigma, m),
            ),
        })
    }

    /// Violation messages for this scenario; an empty list means valid.
    fn validate(&self) -> Vec<String> {
        match self.inner.validate() {
            Ok(()) => Vec::new(),
            Err(violations) => violations.iter().map(|v| v.to_string()).collect(),
        }
    }

    /// Total backup chain copies reserved across all backup servers.
    fn total_backup_subchains(&self) -> u32 {
        self.inner.total_backup_subchains()
    }

    #[getter]
    fn strategy(&self) -> &'static str {
        self.inner.strategy.token()
    }
    #[getter]
    fn n(&self) -> u32 {
        self.inner.chain.n
    }
    #[getter]
    fn psi(&self) -> u32 {
        self.inner.chain.psi_total
    }
    #[getter]
    fn n_servers(&self) -> u32 {
        self.inner.chain.n_servers
    }
    #[getter]
    fn psi_split(&self) -> Vec<u32> {
        self.inner.chain.psi_split.clone()
    }
    #[getter]
    fn sigma(&self) -> u32 {
        self.inner.backup.sigma
    }
    #[getter]
    fn m(&self) -> u32 {
        self.inner.backup.m
    }
    #[getter]
    fn phi(&self) -> f64 {
        self.inner.params.phi
    }
    #[getter]
    fn phi_r(&self) -> f64 {
        self.inner.params.phi_r
    }
    #[getter]
    fn upsilon(&self) -> f64 {
        self.inner.params.upsilon
    }
    #[getter]
    fn upsilon_r(&self) -> f64 {
        self.inner.params.upsilon_r
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(strategy='{}', n={}, psi={}, n_servers={}, sigma={}, m={})",
            self.strategy(),
            self.n(),
            self.psi(),
            self.n_servers(),
            self.sigma(),
            self.m(),
        )
    }
}

/// Monte Carlo outcome: sample mean with a 95% confidence interval.
#[pyclass(name = "Estimate")]
struct PyEstimate {
    inner: sfcrel::Estimate,
}

#[pymethods]
impl PyEstimate {
    #[getter]
    fn mean(&self) -> f64 {
        self.inner.mean
    }
    #[getter]
    fn ci_low(&self) -> f64 {
        self.inner.ci_low
    }
    #[getter]
    fn ci_high(&self) -> f64 {
        self.inner.ci_high
    }
    #[getter]
    fn trials(&self) -> u64 {
        self.inner.trials
    }
    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }
    #[getter]
    fn successes(&self) -> u64 {
        self.inner.successes
    }

    fn __repr__(&self) -> String {
        format!(
            "Estimate(mean={}, ci=({}, {}), trials={}, seed={})",
            self.inner.mean,
            self.inner.ci_low,
            self.inner.ci_high,
            self.inner.trials,
            self.inner.seed,
        )
    }
}

/// Result of the minimal-provisioning search.
#[pyclass(name = "ProvisioningResult")]
struct PyProvisioningResult {
    inner: sfcrel::ProvisioningResult,
}

#[pymethods]
impl PyProvisioningResult {
    #[getter]
    fn sigma_min(&self) -> u32 {
        self.inner.sigma_min
    }
    #[getter]
    fn sigma_total(&self) -> u32 {
        self.inner.sigma_total
    }
    #[getter]
    fn achieved(&self) -> f64 {
        self.inner.achieved
    }
    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega.value()
    }
    #[getter]
    fn witness_below(&self) -> Option<f64> {
        self.inner.witness_below
    }

    fn __repr__(&self) -> String {
        format!(
            "ProvisioningResult(sigma_min={}, sigma_total={}, achieved={}, omega={})",
            self.inner.sigma_min,
            self.inner.sigma_total,
            self.inner.achieved,
            self.inner.omega.value(),
        )
    }
}

/// Closed-form service success probability of a valid scenario.
#[pyfunction]
fn evaluate(scenario: &PyScenario) -> PyResult<f64> {
    let sc = scenario.checked()?;
    Ok(sfcrel::evaluate(sc)
        .map_err(|e| PyValueError::new_err(e.to_string()))?
        .value())
}

/// Active-to-total VNF resource ratio of a valid scenario.
#[pyfunction]
fn utilization(scenario: &PyScenario) -> PyResult<f64> {
    Ok(sfcrel::utilization(scenario.checked()?).value())
}

/// Monte Carlo estimate over `trials` sampled component worlds; fixed seeds
/// give bit-reproducible results regardless of worker thread count.
#[pyfunction]
#[pyo3(signature = (scenario, trials=1_000_000, seed=42))]
fn estimate(scenario: &PyScenario, trials: u64, seed: u64) -> PyResult<PyEstimate> {
    if trials == 0 {
        return Err(PyValueError::new_err("trials must be at least 1"));
    }
    let sc = scenario.checked()?;
    Ok(PyEstimate {
        inner: sfcrel::estimate(sc, trials, seed),
    })
}

/// Exact success probability by exhaustive enumeration of all component
/// states (scenarios with at most 24 components).
#[pyfunction]
fn enumerate_exact(scenario: &PyScenario) -> PyResult<f64> {
    let sc = scenario.checked()?;
    Ok(sfcrel::enumerate_exact(sc)
        .map_err(|e| PyValueError::new_err(e.to_string()))?
        .value())
}

/// Smallest backup copy count reaching `target`, keeping the scenario's
/// strategy, chain, reliabilities and (for the pooled strategy) `m`; the
/// scenario's own `sigma` is the search variable and is ignored. Raises
/// `ValueError` when the target is unreachable.
#[pyfunction]
fn min_sigma(scenario: &PyScenario, target: f64) -> PyResult<PyProvisioningResult> {
    let sc = &scenario.inner;
    let result = sfcrel::min_sigma(sc.strategy, sc.params, &sc.chain, sc.backup.m, target)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(PyProvisioningResult { inner: result })
}

/// Largest sub-flow count the scenario's fixed backup budget still protects
/// at `target` (0 when even one sub-flow cannot be protected); the scenario's
/// own `n` is the search variable and is ignored.
#[pyfunction]
fn max_protected_n(scenario: &PyScenario, target: f64) -> PyResult<u32> {
    let sc = &scenario.inner;
    sfcrel::max_protected_n(
        sc.strategy,
        sc.params,
        sc.chain.psi_total,
        sc.chain.n_servers,
        sc.backup.sigma,
        sc.backup.m,
        target,
    )
    .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn sfcrel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyProvisioningResult>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(utilization, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_exact, m)?)?;
    m.add_function(wrap_pyfunction!(min_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(max_protected_n, m)?)?;
    Ok(())
}
