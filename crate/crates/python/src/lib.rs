//! Python module `blockrig`. Fractions come back as `fractions.Fraction`,
//! matrices as lists of `0`/`1` row strings.

pub mod ops;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ops::Fraction;

fn err(e: blockrig::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, (num, den): Fraction) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((num, den))
}

#[pyfunction]
fn rank(rows: Vec<String>) -> PyResult<usize> {
    ops::rank(&rows).map_err(err)
}

/// Returns `{"rigid": bool, "b": [...], "c": [...]}`.
#[pyfunction]
fn matrix_rigidity<'py>(py: Python<'py>, rows: Vec<String>, r: usize, s: usize) -> PyResult<Bound<'py, PyDict>> {
    let (rigid, b, c) = ops::matrix_rigidity(&rows, r, s).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("rigid", rigid)?;
    d.set_item("b", b)?;
    d.set_item("c", c)?;
    Ok(d)
}

/// Returns `{"rigid": bool, "value": Fraction, "worst": [[...], ...]}`.
#[pyfunction]
fn function_rigidity<'py>(
    py: Python<'py>,
    k: usize,
    table: Vec<u64>,
    r: &str,
    s: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let (rigid, value, worst) = ops::function_rigidity(k, table, r, s).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("rigid", rigid)?;
    d.set_item("value", fraction(py, value)?)?;
    d.set_item("worst", worst)?;
    Ok(d)
}

/// Exact value and an optimal strategy of an explicit independent game.
#[pyfunction]
#[pyo3(signature = (question_bits, views, answer_len, targets, solver = "bnb"))]
fn game_value<'py>(
    py: Python<'py>,
    question_bits: usize,
    views: Vec<Vec<usize>>,
    answer_len: usize,
    targets: Vec<Vec<u64>>,
    solver: &str,
) -> PyResult<(Bound<'py, PyAny>, Vec<Vec<u64>>)> {
    let g = ops::game(question_bits, views, answer_len, targets).map_err(err)?;
    let (value, tables) = ops::game_value(&g, solver).map_err(err)?;
    Ok((fraction(py, value)?, tables))
}

/// Lower and upper bounds on the value of the n-fold repetition.
#[pyfunction]
fn repetition_bounds<'py>(
    py: Python<'py>,
    question_bits: usize,
    views: Vec<Vec<usize>>,
    answer_len: usize,
    targets: Vec<Vec<u64>>,
    n: u32,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let g = ops::game(question_bits, views, answer_len, targets).map_err(err)?;
    let (lo, hi) = ops::repetition_bounds(&g, n).map_err(err)?;
    Ok((fraction(py, lo)?, fraction(py, hi)?))
}

#[pyfunction]
fn transpose_value(py: Python<'_>, n: usize, rows_seen: Vec<Vec<usize>>) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, ops::transpose_value(n, &rows_seen).map_err(err)?)
}

#[pyfunction]
fn tensor_lift(k: usize, table: Vec<u64>, n: usize, x: &str) -> PyResult<String> {
    ops::tensor_lift_eval(k, table, n, x).map_err(err)
}

/// Runs the generated Tensor_k machine; returns `(output, steps, predicted_steps)`.
#[pyfunction]
fn run_tensor_machine(k: usize, table: Vec<u64>, n: usize, x: &str) -> PyResult<(String, u64, u64)> {
    ops::run_tensor_machine(k, table, n, x).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (machine_text, input, b, step_limit = 1_000_000))]
fn computation_graph(machine_text: &str, input: &str, b: u64, step_limit: u64) -> PyResult<(usize, Vec<(usize, usize)>)> {
    ops::graph_edges(machine_text, input, b, step_limit).map_err(err)
}

#[pyfunction]
fn log_star(n: u64) -> u32 {
    blockrig::tmsim::log_star(n)
}

#[pymodule(name = "blockrig")]
fn blockrig_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_rigidity, m)?)?;
    m.add_function(wrap_pyfunction!(function_rigidity, m)?)?;
    m.add_function(wrap_pyfunction!(game_value, m)?)?;
    m.add_function(wrap_pyfunction!(repetition_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(transpose_value, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_lift, m)?)?;
    m.add_function(wrap_pyfunction!(run_tensor_machine, m)?)?;
    m.add_function(wrap_pyfunction!(computation_graph, m)?)?;
    m.add_function(wrap_pyfunction!(log_star, m)?)?;
    Ok(())
}
