use serde::Serialize;

use super::builders::repeat;
use super::game::IndependentGame;
use super::solver::{value_exact, SolverBudget};
use crate::error::{Error, Result};
use crate::exact::{checked_pow, opt_value_string, to_f64, value_string, Value};

/// Product-strategy lower bound and single-player upper bound on the value
/// of the `n`-fold repetition.
pub fn repeated_value_bounds(
    game: &IndependentGame,
    n: u32,
    budget: &SolverBudget,
) -> Result<(Value, Value)> {
    let base = value_exact(game, budget)?.value;
    let lower = checked_pow(base, n).ok_or_else(|| overflow(n))?;
    let mut best_marginal = Value::from_integer(1);
    for j in 0..game.players() {
        best_marginal = best_marginal.min(game.player_marginal_value(j)?);
    }
    let upper = checked_pow(best_marginal, n).ok_or_else(|| overflow(n))?;
    Ok((lower, upper))
}

fn overflow(n: u32) -> Error {
    Error::budget("rational power", format!("exponent {n}"), "64-bit denominators")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: u32,
    #[serde(with = "value_string")]
    pub lower: Value,
    #[serde(serialize_with = "opt_value_string::serialize")]
    pub exact: Option<Value>,
    #[serde(with = "value_string")]
    pub upper: Value,
    /// `log(exact) / (n log v)`, absent when exact is infeasible or `v = 1`.
    pub exact_exponent: Option<f64>,
    /// `log(upper) / (n log v)`, absent when `v = 1`.
    pub upper_exponent: Option<f64>,
}

/// Rows `n = 1..=n_max` comparing the repeated value with its bounds.
/// Cells whose exact value exceeds the solver budget are left empty.
pub fn repetition_decay_experiment(
    game: &IndependentGame,
    n_max: u32,
    budget: &SolverBudget,
) -> Result<Vec<DecayRow>> {
    let base = value_exact(game, budget)?.value;
    let log_base = to_f64(&base).ln();
    let exponent = |x: &Value, n: u32| {
        if base == Value::from_integer(1) || *x.numer() == 0 {
            None
        } else {
            Some(to_f64(x).ln() / (f64::from(n) * log_base))
        }
    };
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let (lower, upper) = repeated_value_bounds(game, n, budget)?;
        let exact = match repeat(game, n as usize) {
            Ok(g) => match value_exact(&g, budget) {
                Ok(report) => Some(report.value),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            },
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        rows.push(DecayRow {
            n,
            lower,
            exact_exponent: exact.as_ref().and_then(|x| exponent(x, n)),
            exact,
            upper_exponent: exponent(&upper, n),
            upper,
        });
    }
    Ok(rows)
}
