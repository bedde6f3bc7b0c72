use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bialg::io::{parse_lie, parse_tensor, parse_signature, tensor_to_json};
use bialg::ledger::ConventionLedger;

fn err(e: bialg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Runs the command line tool in-process; returns (exit code, stdout, stderr).
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let r = bialg::cli::run(std::iter::once("bialg".to_string()).chain(args));
    (r.code, r.stdout, r.stderr)
}

#[pyfunction]
fn ledger() -> String {
    serde_json::to_string(&ConventionLedger::current()).expect("ledger serializes")
}

/// Antisymmetry and Jacobi of a Lie algebra given as file-format JSON.
#[pyfunction]
fn check_lie(src: &str) -> PyResult<bool> {
    Ok(parse_lie(src).map_err(err)?.check().pass)
}

/// φ(c) as a tensor literal, for a Lie algebra and a symmetric 2-tensor.
#[pyfunction]
fn casimir_phi(lie: &str, casimir: &str) -> PyResult<String> {
    let g = parse_lie(lie).map_err(err)?;
    let sig = parse_signature("tensor2").map_err(err)?;
    let c = parse_tensor(casimir, &g, Some(&sig), g.field().vars()).or_else(|_| parse_tensor(casimir, &g, None, g.field().vars())).map_err(err)?;
    let phi = bialg::qlb::casimir_to_phi(&g, &c).map_err(err)?;
    Ok(tensor_to_json(&phi, &g, g.field().vars()).to_string())
}

#[pymodule]
fn pybialg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(ledger, m)?)?;
    m.add_function(wrap_pyfunction!(check_lie, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_phi, m)?)?;
    Ok(())
}
