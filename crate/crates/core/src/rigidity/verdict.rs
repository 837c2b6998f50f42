//! Function rigidity through game values: `f` is `(r, s)`-rigid iff every
//! view family `S` gives `val(G_S) < 2^(-r)`, and likewise for the tensor
//! lift with the repeated games.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::NonRigidityCertificate;
use super::function::{family_count, BooleanFunction, ViewFamily};
use crate::error::{Error, Result};
use crate::exact::{below_pow2_neg, value_string, Value};
use crate::games::builders::{build_gs, repeat};
use crate::games::solver::{value_exact, SolverBudget, ValueReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionBudget {
    pub solver: SolverBudget,
    /// Largest number of view families swept.
    pub max_families: usize,
}

impl Default for FunctionBudget {
    fn default() -> Self {
        Self {
            solver: SolverBudget::default(),
            max_families: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionRigidityReport {
    pub rigid: bool,
    /// First family (lexicographically) attaining the largest value.
    pub worst: ViewFamily,
    #[serde(with = "value_string")]
    pub value: Value,
    pub families: usize,
    /// Present when not rigid: the worst family with its optimal strategy.
    pub certificate: Option<NonRigidityCertificate>,
}

fn families(k: usize, s: usize, budget: &FunctionBudget) -> Result<Vec<ViewFamily>> {
    let count = family_count(k, s);
    if count.is_none_or(|c| c > budget.max_families) {
        return Err(Error::budget(
            "view families",
            count.map_or_else(|| format!("C({k},{s})^{k}"), |c| c.to_string()),
            budget.max_families,
        ));
    }
    ViewFamily::all(k, s)
}

/// Values of all families in parallel, then the first maximum in family
/// order, so the outcome does not depend on scheduling.
fn sweep(
    families: Vec<ViewFamily>,
    r: Ratio<u64>,
    block_len: usize,
    solve: impl Fn(&ViewFamily) -> Result<ValueReport> + Sync,
) -> Result<FunctionRigidityReport> {
    let reports = families
        .par_iter()
        .map(&solve)
        .collect::<Result<Vec<_>>>()?;
    let (best, report) = reports
        .iter()
        .enumerate()
        .fold(None::<(usize, &ValueReport)>, |acc, (i, rep)| match acc {
            Some((_, b)) if b.value >= rep.value => acc,
            _ => Some((i, rep)),
        })
        .expect("at least one family");
    let worst = families[best].clone();
    let rigid = below_pow2_neg(report.value, r);
    let certificate = (!rigid).then(|| NonRigidityCertificate {
        input_blocks: worst.k(),
        block_len,
        views: worst.sets().to_vec(),
        locals: report.strategy.tables.clone(),
        agreement_count: report.wins,
    });
    Ok(FunctionRigidityReport {
        rigid,
        worst,
        value: report.value,
        families: reports.len(),
        certificate,
    })
}

/// Exact `(r, s)`-rigidity of `f`, with `r` any nonnegative rational.
pub fn is_function_rigid(
    f: &BooleanFunction,
    r: Ratio<u64>,
    s: usize,
    budget: &FunctionBudget,
) -> Result<FunctionRigidityReport> {
    let all = families(f.arity(), s, budget)?;
    sweep(all, r, 1, |fam| value_exact(&build_gs(f, fam)?, &budget.solver))
}

/// Exact `(r, s)`-block-rigidity of `f^{⊗n}` from the repeated games. The
/// certificate, if any, is over blocks of length `n`.
pub fn is_block_rigid_function(
    f: &BooleanFunction,
    n: usize,
    r: Ratio<u64>,
    s: usize,
    budget: &FunctionBudget,
) -> Result<FunctionRigidityReport> {
    let k = f.arity();
    let per_game = (k as u64).saturating_mul(n as u64).saturating_mul(1u64.checked_shl((n * s) as u32).unwrap_or(u64::MAX));
    if per_game > budget.solver.branch_bound_bits {
        return Err(Error::budget("repeated joint strategy table bits", per_game, budget.solver.branch_bound_bits));
    }
    let all = families(k, s, budget)?;
    sweep(all, r, n, |fam| value_exact(&repeat(&build_gs(f, fam)?, n)?, &budget.solver))
}
