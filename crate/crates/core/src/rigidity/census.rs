use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::BooleanFunction;
use super::verdict::{is_function_rigid, FunctionBudget};
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Largest number of functions an exhaustive census visits.
pub const MAX_EXHAUSTIVE_FUNCTIONS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CensusMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub k: usize,
    pub s: usize,
    pub total: u64,
    pub rigid: u64,
}

impl CensusReport {
    pub fn fraction(&self) -> Ratio<u64> {
        if self.total == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(self.rigid, self.total)
        }
    }
}

/// Counts `(r, s)`-rigid functions of arity `k`, either over all
/// `2^(k 2^k)` functions or over a seeded sample.
pub fn rigidity_census(
    k: usize,
    r: Ratio<u64>,
    s: usize,
    mode: CensusMode,
    budget: &FunctionBudget,
) -> Result<CensusReport> {
    let functions: Vec<BooleanFunction> = match mode {
        CensusMode::Exhaustive => {
            let code_bits = k << k;
            if code_bits >= 64 || 1u64 << code_bits > MAX_EXHAUSTIVE_FUNCTIONS {
                return Err(Error::budget(
                    "functions in exhaustive census",
                    format!("2^{code_bits}"),
                    MAX_EXHAUSTIVE_FUNCTIONS,
                ));
            }
            (0..1u64 << code_bits)
                .map(|code| BooleanFunction::from_code(k, code))
                .collect::<Result<_>>()?
        }
        CensusMode::Sample { count, seed } => {
            let mut rng = seeded(seed);
            (0..count).map(|_| BooleanFunction::random(k, &mut rng)).collect()
        }
    };
    let verdicts = functions
        .par_iter()
        .map(|f| is_function_rigid(f, r, s, budget).map(|rep| rep.rigid))
        .collect::<Result<Vec<bool>>>()?;
    Ok(CensusReport {
        k,
        s,
        total: verdicts.len() as u64,
        rigid: verdicts.iter().filter(|&&v| v).count() as u64,
    })
}
