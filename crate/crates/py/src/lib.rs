//! Python bindings. Symbols are passed as JSON text in the same form the CLI
//! configs use, e.g. `{"kind": "stable", "alpha": 0.5}`.

use nonlocal_koch::cli::{run_battery, VerifyConfig};
use nonlocal_koch::nonlocal_ops::mittag_leffler::mittag_leffler as ml;
use nonlocal_koch::subordinate::{density_h as dh, density_l as dl};
use nonlocal_koch::BernsteinSymbol;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn symbol(text: &str) -> PyResult<BernsteinSymbol> {
    serde_json::from_str(text).map_err(err)
}

/// Laplace exponent of the subordinator at `lam`.
#[pyfunction]
fn phi(sym: &str, lam: f64) -> PyResult<f64> {
    symbol(sym)?.phi(lam).map_err(err)
}

/// Density of the subordinator `H_t` at `x`.
#[pyfunction]
fn density_h(sym: &str, t: f64, x: f64) -> PyResult<f64> {
    dh(&symbol(sym)?, t, x).map_err(err)
}

/// Density of the inverse `L_t` at level `x`.
#[pyfunction]
fn density_l(sym: &str, t: f64, x: f64) -> PyResult<f64> {
    dl(&symbol(sym)?, t, x).map_err(err)
}

/// One-parameter Mittag-Leffler function at real `z`.
#[pyfunction]
fn mittag_leffler(alpha: f64, z: f64) -> f64 {
    ml(alpha, z)
}

/// Analytic identity battery as a JSON list of checks.
#[pyfunction]
#[pyo3(signature = (groups=None, tolerance=None))]
fn verify(groups: Option<Vec<String>>, tolerance: Option<f64>) -> PyResult<String> {
    let checks = run_battery(&VerifyConfig { groups, tolerance }).map_err(err)?;
    serde_json::to_string(&checks).map_err(err)
}

#[pymodule]
fn nonlocal_koch_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", nonlocal_koch::cli::VERSION)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(density_h, m)?)?;
    m.add_function(wrap_pyfunction!(density_l, m)?)?;
    m.add_function(wrap_pyfunction!(mittag_leffler, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
