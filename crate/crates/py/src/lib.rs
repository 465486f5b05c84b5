//! Python bindings: the `glsf` module.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use glsf::config::{parse_config as parse, Experiment, RunConfig};
use glsf::dynamics::{simulate as simulate_core, SimulateOptions};
use glsf::run::{boundary_data, initial_state};
use glsf::GlsfError;

fn value_err(e: GlsfError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: GlsfError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn config(text: &str) -> PyResult<RunConfig> {
    parse(text).map_err(value_err)
}

/// Parses a `key = value` configuration and returns its canonical text.
#[pyfunction]
fn parse_config(text: &str) -> PyResult<String> {
    Ok(config(text)?.to_text())
}

/// Runs an experiment, writing outputs under `out`. Returns `(passed, report)`.
#[pyfunction]
fn run(py: Python<'_>, experiment: &str, config_text: &str, out: PathBuf) -> PyResult<(bool, String)> {
    let mut cfg = config(config_text)?;
    cfg.experiment =
        Experiment::parse(experiment).ok_or_else(|| PyValueError::new_err(format!("unknown experiment `{experiment}`")))?;
    cfg.out = out;
    let report = py.detach(|| glsf::run::run(&cfg)).map_err(runtime_err)?;
    Ok((report.passed(), report.to_text()))
}

/// Integrates the configured initial state; one dict per recorded sample.
#[pyfunction]
fn simulate(py: Python<'_>, config_text: &str) -> PyResult<Vec<BTreeMap<&'static str, f64>>> {
    let cfg = config(config_text)?;
    let records = py
        .detach(|| {
            let g = cfg.grid()?;
            let p = cfg.params()?;
            let b = boundary_data(&cfg, g)?;
            let z0 = initial_state(&cfg, g);
            simulate_core(&z0, &p, &b, cfg.integrator(), SimulateOptions::new(cfg.t_end, cfg.record_every))
        })
        .map_err(runtime_err)?
        .records;
    let keys = ["t", "L", "D", "z1", "z2", "grad_u", "divA", "psit", "F2"];
    Ok(records
        .iter()
        .map(|r| keys.iter().copied().zip(r.values()).collect())
        .collect())
}

/// Smallest eigenvalue of the coupling matrix `q` for the given parameters.
#[pyfunction]
fn q_min_eigenvalue(gamma: f64, kappa: f64, mu: f64, c0: f64, k0: f64) -> PyResult<f64> {
    let p = glsf::derive_params(gamma, kappa, mu, c0, k0).map_err(value_err)?;
    Ok(glsf::functionals::q_min_eigenvalue(&p))
}

/// Reads a `.fld` snapshot into a dict of grid metadata and flat node arrays.
#[pyfunction]
fn read_snapshot<'py>(py: Python<'py>, path: PathBuf) -> PyResult<Bound<'py, PyDict>> {
    let s = glsf::io::read_snapshot(&path).map_err(value_err)?;
    let g = s.grid();
    let d = PyDict::new(py);
    d.set_item("nx", g.nx)?;
    d.set_item("ny", g.ny)?;
    d.set_item("lx", g.lx)?;
    d.set_item("ly", g.ly)?;
    d.set_item("psi_re", s.psi.values.iter().map(|v| v.re).collect::<Vec<_>>())?;
    d.set_item("psi_im", s.psi.values.iter().map(|v| v.im).collect::<Vec<_>>())?;
    d.set_item("a1", &s.a.x)?;
    d.set_item("a2", &s.a.y)?;
    d.set_item("u", &s.u.values)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "glsf")]
fn glsf_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse_config, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(q_min_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(read_snapshot, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
