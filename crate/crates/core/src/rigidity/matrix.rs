//! Exact rigidity searches for small matrices.
//!
//! A matrix `A` is `(r, s)`-rigid when no `C` with at most `s` ones per row
//! leaves `rank(A + C) <= r`. The search walks the rows of `C` in order,
//! keeping the row space of `B = A + C` built so far and backing off as soon
//! as its rank passes `r`. Row candidates are tried in increasing integer
//! order of their masks, so the witness found is the first in that order.

use serde::{Deserialize, Serialize};

use super::function::{binomial, combinations};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BlockLayout, RowSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Upper limit on the number of candidate `C` patterns.
    pub max_candidates: u128,
    /// Largest `nk` accepted by the block search.
    pub max_block_dim: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_candidates: 1 << 40,
            max_block_dim: 8,
        }
    }
}

/// `A = B + C` with `B` low rank and `C` sparse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDecomposition {
    pub b: BitMatrix,
    pub c: BitMatrix,
}

impl MatrixDecomposition {
    fn check_sum(&self, a: &BitMatrix) -> Result<()> {
        let sum = self.b.try_add(&self.c)?;
        if &sum != a {
            return Err(Error::InvalidWitness("B + C differs from A".into()));
        }
        Ok(())
    }

    fn check_rank(&self, r: usize) -> Result<()> {
        let rank = self.b.rank();
        if rank > r {
            return Err(Error::InvalidWitness(format!("rank(B) = {rank} exceeds {r}")));
        }
        Ok(())
    }

    /// Checks `A = B + C`, `rank(B) <= r` and at most `s` ones per row of `C`.
    pub fn validate(&self, a: &BitMatrix, r: usize, s: usize) -> Result<()> {
        self.check_sum(a)?;
        self.check_rank(r)?;
        let sparsity = self.c.row_sparsity();
        if sparsity > s {
            return Err(Error::InvalidWitness(format!("C has a row of weight {sparsity} > {s}")));
        }
        Ok(())
    }

    /// As [`validate`](Self::validate) with sparsity counted in nonzero
    /// blocks per block-row.
    pub fn validate_block(&self, a: &BitMatrix, layout: BlockLayout, r: usize, s: usize) -> Result<()> {
        self.check_sum(a)?;
        self.check_rank(r)?;
        let sparsity = self.c.block_row_sparsity(layout)?;
        if sparsity > s {
            return Err(Error::InvalidWitness(format!(
                "C has a block-row with {sparsity} nonzero blocks > {s}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub rigid: bool,
    pub witness: Option<MatrixDecomposition>,
    /// Search nodes visited (zero when a shortcut decided).
    pub nodes: u64,
}

impl RigidityReport {
    fn not_rigid(a: &BitMatrix, c: BitMatrix, nodes: u64) -> Self {
        let b = a.try_add(&c).expect("same shape");
        Self {
            rigid: false,
            witness: Some(MatrixDecomposition { b, c }),
            nodes,
        }
    }
}

fn check_shape(a: &BitMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "rigidity needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.cols() > 64 {
        return Err(Error::budget("matrix dimension", a.cols(), 64));
    }
    Ok(())
}

/// Decides `(r, s)`-rigidity of a square `A` by exact search.
pub fn is_matrix_rigid(a: &BitMatrix, r: usize, s: usize, budget: &SearchBudget) -> Result<RigidityReport> {
    check_shape(a)?;
    let n = a.rows();
    if a.rank() <= r {
        return Ok(RigidityReport::not_rigid(a, BitMatrix::zeros(n, n), 0));
    }
    if s >= n {
        return Ok(RigidityReport::not_rigid(a, a.clone(), 0));
    }
    let per_row: u128 = 1 + (0..=s).map(|t| binomial(n, t).unwrap_or(usize::MAX) as u128).sum::<u128>();
    let total = checked_power(per_row, n);
    if total.is_none_or(|t| t > budget.max_candidates) {
        return Err(Error::budget(
            "candidate sparse patterns",
            total.map_or_else(|| format!("{per_row}^{n}"), |t| t.to_string()),
            budget.max_candidates,
        ));
    }
    let candidates = sparse_masks(n, s);
    let rows: Vec<Vec<u64>> = (0..n).map(|_| candidates.clone()).collect();
    Ok(search_rows(a, r, &|i| rows[i].clone()))
}

fn checked_power(base: u128, exp: usize) -> Option<u128> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

/// Masks over `n` columns with at most `s` ones, ascending.
fn sparse_masks(n: usize, s: usize) -> Vec<u64> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if n <= 20 {
        return (0..=full).filter(|m| m.count_ones() as usize <= s).collect();
    }
    let mut out: Vec<u64> = (0..=s)
        .flat_map(|t| combinations(n, t))
        .map(|set| set.iter().fold(0u64, |m, &c| m | (1 << c)))
        .collect();
    out.sort_unstable();
    out
}

/// Row-by-row search: `candidates(i)` lists the allowed rows of `C` for row
/// `i`; the first `C` with `rank(A + C) <= r` is returned.
fn search_rows(a: &BitMatrix, r: usize, candidates: &dyn Fn(usize) -> Vec<u64>) -> RigidityReport {
    let n = a.rows();
    let mut chosen = vec![0u64; n];
    let mut nodes = 0;
    let found = descend(a, r, candidates, 0, &RowSpace::default(), &mut chosen, &mut nodes);
    if found {
        RigidityReport::not_rigid(a, BitMatrix::from_row_masks(n, &chosen), nodes)
    } else {
        RigidityReport {
            rigid: true,
            witness: None,
            nodes,
        }
    }
}

fn descend(
    a: &BitMatrix,
    r: usize,
    candidates: &dyn Fn(usize) -> Vec<u64>,
    row: usize,
    space: &RowSpace,
    chosen: &mut [u64],
    nodes: &mut u64,
) -> bool {
    if row == a.rows() {
        return true;
    }
    let target = a.row_mask(row);
    for c in candidates(row) {
        *nodes += 1;
        let mut next = space.clone();
        if next.insert(target ^ c) && next.rank() > r {
            continue;
        }
        chosen[row] = c;
        if descend(a, r, candidates, row + 1, &next, chosen, nodes) {
            return true;
        }
    }
    false
}

/// Decides `(r, s)`-block-rigidity: sparsity counts nonzero `n x n` blocks
/// per block-row. Each block-row picks a support of `min(s, k)` block
/// columns (lexicographic), then each of its rows any pattern inside it.
pub fn is_block_rigid_matrix(
    a: &BitMatrix,
    layout: BlockLayout,
    r: usize,
    s: usize,
    budget: &SearchBudget,
) -> Result<RigidityReport> {
    check_shape(a)?;
    let total = layout.total();
    if a.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "layout n={}, k={} needs a {total}x{total} matrix, got {}x{}",
            layout.n,
            layout.k,
            a.rows(),
            a.cols()
        )));
    }
    if total > budget.max_block_dim {
        return Err(Error::budget("block matrix dimension nk", total, budget.max_block_dim));
    }
    if a.rank() <= r {
        return Ok(RigidityReport::not_rigid(a, BitMatrix::zeros(total, total), 0));
    }
    let (n, k) = (layout.n, layout.k);
    let width = s.min(k);
    if width == k {
        return Ok(RigidityReport::not_rigid(a, a.clone(), 0));
    }
    let supports: Vec<u64> = combinations(k, width)
        .into_iter()
        .map(|blocks| {
            blocks
                .iter()
                .fold(0u64, |m, &q| m | (((1u64 << n) - 1) << (q * n)))
        })
        .collect();
    let per_block_row = (supports.len() as u128).checked_mul(1u128.checked_shl((n * n * width) as u32).unwrap_or(0));
    let needed = per_block_row.filter(|&p| p > 0).and_then(|p| checked_power(p, k));
    if needed.is_none_or(|t| t > budget.max_candidates) {
        return Err(Error::budget(
            "candidate block patterns",
            needed.map_or_else(|| "overflow".to_string(), |t| t.to_string()),
            budget.max_candidates,
        ));
    }
    let mut chosen = vec![0u64; total];
    let mut nodes = 0;
    let found = block_descend(a, r, n, &supports, 0, &RowSpace::default(), &mut chosen, &mut nodes);
    Ok(if found {
        RigidityReport::not_rigid(a, BitMatrix::from_row_masks(total, &chosen), nodes)
    } else {
        RigidityReport {
            rigid: true,
            witness: None,
            nodes,
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn block_descend(
    a: &BitMatrix,
    r: usize,
    n: usize,
    supports: &[u64],
    block_row: usize,
    space: &RowSpace,
    chosen: &mut [u64],
    nodes: &mut u64,
) -> bool {
    if block_row * n == a.rows() {
        return true;
    }
    for &support in supports {
        if rows_in_support(a, r, n, support, block_row, 0, space, chosen, nodes, supports) {
            return true;
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn rows_in_support(
    a: &BitMatrix,
    r: usize,
    n: usize,
    support: u64,
    block_row: usize,
    offset: usize,
    space: &RowSpace,
    chosen: &mut [u64],
    nodes: &mut u64,
    supports: &[u64],
) -> bool {
    if offset == n {
        return block_descend(a, r, n, supports, block_row + 1, space, chosen, nodes);
    }
    let row = block_row * n + offset;
    let target = a.row_mask(row);
    // submasks of the support in increasing order
    let mut c = 0u64;
    loop {
        *nodes += 1;
        let mut next = space.clone();
        if !(next.insert(target ^ c) && next.rank() > r) {
            chosen[row] = c;
            if rows_in_support(a, r, n, support, block_row, offset + 1, &next, chosen, nodes, supports) {
                return true;
            }
        }
        c = c.wrapping_sub(support) & support;
        if c == 0 {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn identity_is_not_rigid_at_sparsity_one() {
        let i2 = BitMatrix::identity(2);
        let rep = is_matrix_rigid(&i2, 0, 1, &budget()).unwrap();
        assert!(!rep.rigid);
        let w = rep.witness.unwrap();
        assert!(w.b.is_zero());
        assert_eq!(w.c, i2);
        w.validate(&i2, 0, 1).unwrap();
    }

    #[test]
    fn zero_matrix_is_trivially_decomposed() {
        let z = BitMatrix::zeros(3, 3);
        let w = is_matrix_rigid(&z, 0, 0, &budget()).unwrap().witness.unwrap();
        assert!(w.b.is_zero() && w.c.is_zero());
    }

    #[test]
    fn identity_three_is_rigid_at_rank_zero_sparsity_zero() {
        let rep = is_matrix_rigid(&BitMatrix::identity(3), 1, 0, &budget()).unwrap();
        assert!(rep.rigid && rep.witness.is_none());
        // one entry per row fixes it
        let rep = is_matrix_rigid(&BitMatrix::identity(3), 1, 1, &budget()).unwrap();
        assert!(!rep.rigid);
        rep.witness.unwrap().validate(&BitMatrix::identity(3), 1, 1).unwrap();
    }

    #[test]
    fn upper_triangular_ones_needs_more_than_one_flip() {
        // rank 3; at rank 0 every row must be cleared, which needs weight 3
        let a = BitMatrix::from_rows(&["111", "011", "001"]).unwrap();
        assert!(is_matrix_rigid(&a, 0, 2, &budget()).unwrap().rigid);
        assert!(!is_matrix_rigid(&a, 0, 3, &budget()).unwrap().rigid);
    }

    #[test]
    fn budget_and_shape_errors() {
        let tiny = SearchBudget {
            max_candidates: 10,
            max_block_dim: 8,
        };
        assert!(matches!(
            is_matrix_rigid(&BitMatrix::identity(4), 1, 1, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(is_matrix_rigid(&BitMatrix::zeros(2, 3), 0, 0, &budget()).is_err());
    }

    #[test]
    fn witness_validation_rejects_bad_witnesses() {
        let a = BitMatrix::identity(2);
        let bad = MatrixDecomposition {
            b: BitMatrix::identity(2),
            c: BitMatrix::zeros(2, 2),
        };
        assert!(bad.validate(&a, 1, 0).is_err());
        assert!(bad.validate(&a, 2, 0).is_ok());
        let off = MatrixDecomposition {
            b: BitMatrix::zeros(2, 2),
            c: BitMatrix::ones(2, 2),
        };
        assert!(off.validate(&a, 2, 2).is_err());
    }

    #[test]
    fn block_identity_and_full_rank_shortcuts() {
        let layout = BlockLayout::new(2, 2).unwrap();
        let i4 = BitMatrix::identity(4);
        let rep = is_block_rigid_matrix(&i4, layout, 0, 1, &budget()).unwrap();
        assert!(!rep.rigid);
        rep.witness.unwrap().validate_block(&i4, layout, 0, 1).unwrap();
        let a = BitMatrix::from_rows(&["1011", "0110", "1101", "0011"]).unwrap();
        let rep = is_block_rigid_matrix(&a, layout, 4, 0, &budget()).unwrap();
        assert_eq!(rep.witness.unwrap().b, a);
    }

    #[test]
    fn block_search_respects_dimension_budget() {
        let layout = BlockLayout::new(3, 3).unwrap();
        assert!(is_block_rigid_matrix(&BitMatrix::identity(9), layout, 0, 1, &budget()).is_err());
    }
}
