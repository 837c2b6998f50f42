//! Plain Rust helpers behind the Python functions, taking and returning
//! simple types (strings, integer lists, fractions as `(num, den)`).

use blockrig::exact::parse_ratio;
use blockrig::games::{build_transpose_game, repeated_value_bounds, value_exact, value_exhaustive, IndependentGame, SolverBudget};
use blockrig::rigidity::{is_function_rigid, is_matrix_rigid, tensor_lift, BooleanFunction, FunctionBudget, SearchBudget};
use blockrig::tmsim::{computation_graph, encode_tensor_input, gen_tensor_k_machine, run, segment, MachineSpec, DEFAULT_TENSOR_K_CAP};
use blockrig::{BitMatrix, BitVector, Error, Result, Value};

pub type Fraction = (u64, u64);

fn frac(v: Value) -> Fraction {
    (*v.numer(), *v.denom())
}

fn rows_of(m: &BitMatrix) -> Vec<String> {
    (0..m.rows()).map(|i| m.row(i).to_string()).collect()
}

pub fn rank(rows: &[String]) -> Result<usize> {
    Ok(BitMatrix::from_rows(rows)?.rank())
}

/// `(rigid, B, C)`; the decomposition is empty when rigid.
pub fn matrix_rigidity(rows: &[String], r: usize, s: usize) -> Result<(bool, Vec<String>, Vec<String>)> {
    let a = BitMatrix::from_rows(rows)?;
    let rep = is_matrix_rigid(&a, r, s, &SearchBudget::default())?;
    Ok(match rep.witness {
        Some(w) => (false, rows_of(&w.b), rows_of(&w.c)),
        None => (true, Vec::new(), Vec::new()),
    })
}

/// `(rigid, worst value, worst view family)`.
pub fn function_rigidity(k: usize, table: Vec<u64>, r: &str, s: usize) -> Result<(bool, Fraction, Vec<Vec<usize>>)> {
    let f = BooleanFunction::new(k, table)?;
    let rep = is_function_rigid(&f, parse_ratio(r)?, s, &FunctionBudget::default())?;
    Ok((rep.rigid, frac(rep.value), rep.worst.sets().to_vec()))
}

pub fn game(question_bits: usize, views: Vec<Vec<usize>>, answer_len: usize, targets: Vec<Vec<u64>>) -> Result<IndependentGame> {
    IndependentGame::new(question_bits, views, answer_len, targets)
}

/// `(value, optimal tables)` with `solver` either `bnb` or `exhaustive`.
pub fn game_value(g: &IndependentGame, solver: &str) -> Result<(Fraction, Vec<Vec<u64>>)> {
    let budget = SolverBudget::default();
    let rep = match solver {
        "bnb" => value_exact(g, &budget)?,
        "exhaustive" => value_exhaustive(g, &budget)?,
        other => return Err(Error::InvalidArgument(format!("unknown solver {other:?}"))),
    };
    Ok((frac(rep.value), rep.strategy.tables))
}

pub fn repetition_bounds(g: &IndependentGame, n: u32) -> Result<(Fraction, Fraction)> {
    let (lo, hi) = repeated_value_bounds(g, n, &SolverBudget::default())?;
    Ok((frac(lo), frac(hi)))
}

pub fn transpose_value(n: usize, rows_seen: &[Vec<usize>]) -> Result<Fraction> {
    let g = build_transpose_game(n, rows_seen)?;
    Ok(frac(value_exact(&g, &SolverBudget::default())?.value))
}

/// `f^{⊗n}(x)` with `x` a block-major bit string.
pub fn tensor_lift_eval(k: usize, table: Vec<u64>, n: usize, x: &str) -> Result<String> {
    let f = BooleanFunction::new(k, table)?;
    let x: BitVector = x.parse()?;
    Ok(tensor_lift(&f, n)?.eval(&x)?.to_string())
}

/// Runs the Tensor_k machine: `(output, steps, alpha + beta n)`.
pub fn run_tensor_machine(k: usize, table: Vec<u64>, n: usize, x: &str) -> Result<(String, u64, u64)> {
    let f = BooleanFunction::new(k, table)?;
    let x: BitVector = x.parse()?;
    let tm = gen_tensor_k_machine(k, DEFAULT_TENSOR_K_CAP)?;
    let expected = tm.steps(n as u64);
    let trace = run(&tm.machine, &encode_tensor_input(&f, &x, n)?, &[], expected + 1)?;
    Ok((trace.output, trace.steps, expected))
}

/// Segment count and edges of the computation graph of a run.
pub fn graph_edges(machine_text: &str, input: &str, b: u64, step_limit: u64) -> Result<(usize, Vec<(usize, usize)>)> {
    let m = MachineSpec::parse_text(machine_text)?;
    let input: Vec<char> = input.chars().collect();
    let trace = run(&m, &input, &[], step_limit)?;
    let g = computation_graph(&segment(&trace, b)?);
    Ok((g.vertices, g.edges))
}
