//! Non-rigidity certificates: local functions that reproduce a target on a
//! large set of inputs.
//!
//! Inputs are `input_blocks` blocks of `block_len` bits each, block `q` at
//! positions `q * block_len ..`. Output block `i` is computed by `locals[i]`
//! from the blocks in `views[i]`; the local table is indexed by the viewed
//! blocks in ascending order, each contributing `block_len` bits (lowest
//! block in the least significant position). With `block_len = 1` this is
//! the plain function case.

use serde::{Deserialize, Serialize};

use super::function::{tensor_lift, BooleanFunction};
use crate::error::{Error, Result};
use crate::games::game::mask;

/// Largest `input_blocks * block_len` for which agreement is recounted.
pub const MAX_RECOUNT_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonRigidityCertificate {
    pub input_blocks: usize,
    pub block_len: usize,
    pub views: Vec<Vec<usize>>,
    pub locals: Vec<Vec<u64>>,
    pub agreement_count: u64,
}

impl NonRigidityCertificate {
    pub fn input_bits(&self) -> usize {
        self.input_blocks * self.block_len
    }

    /// Structural checks: sorted in-range views and correctly sized tables.
    pub fn check_shape(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidWitness(m));
        if self.block_len == 0 || self.block_len > 64 {
            return bad(format!("block length {} out of range", self.block_len));
        }
        if self.views.len() != self.locals.len() {
            return bad(format!("{} views but {} local tables", self.views.len(), self.locals.len()));
        }
        if self.locals.len() * self.block_len > 64 {
            return bad("outputs wider than 64 bits".into());
        }
        for (i, (view, local)) in self.views.iter().zip(&self.locals).enumerate() {
            if view.windows(2).any(|w| w[0] >= w[1]) || view.iter().any(|&q| q >= self.input_blocks) {
                return bad(format!("view {i} {view:?} is not a sorted set of blocks below {}", self.input_blocks));
            }
            let index_bits = view.len() * self.block_len;
            if index_bits > 30 || local.len() != 1usize << index_bits {
                return bad(format!("local {i} has {} entries, expected 2^{index_bits}", local.len()));
            }
            if local.iter().any(|&v| v & !mask(self.block_len) != 0) {
                return bad(format!("local {i} has an entry wider than {} bits", self.block_len));
            }
        }
        Ok(())
    }

    /// Output of the local composition at input `x`.
    pub fn eval(&self, x: u64) -> u64 {
        let n = self.block_len;
        let block_mask = mask(n);
        self.views
            .iter()
            .zip(&self.locals)
            .enumerate()
            .fold(0, |out, (i, (view, local))| {
                let index = view
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (p, &q)| acc | (((x >> (q * n)) & block_mask) << (p * n)));
                out | (local[index as usize] << (i * n))
            })
    }

    /// Exact number of inputs on which the local composition equals `target`.
    pub fn recount(&self, target: impl Fn(u64) -> u64) -> Result<u64> {
        self.check_shape()?;
        let bits = self.input_bits();
        if bits > MAX_RECOUNT_BITS {
            return Err(Error::budget("certificate recount input bits", bits, MAX_RECOUNT_BITS));
        }
        let out_mask = mask(self.locals.len() * self.block_len);
        Ok((0..1u64 << bits).filter(|&x| self.eval(x) == target(x) & out_mask).count() as u64)
    }

    /// Recounts against `target` and compares with the stored count.
    pub fn validate(&self, target: impl Fn(u64) -> u64) -> Result<()> {
        let actual = self.recount(target)?;
        if actual != self.agreement_count {
            return Err(Error::InvalidWitness(format!(
                "certificate claims agreement {} but recount gives {actual}",
                self.agreement_count
            )));
        }
        Ok(())
    }

    /// Validates against `f` itself (`block_len = 1`) or its tensor lift.
    pub fn validate_function(&self, f: &BooleanFunction) -> Result<()> {
        if self.input_blocks != f.arity() || self.locals.len() != f.arity() {
            return Err(Error::InvalidWitness(format!(
                "certificate over {} blocks with {} outputs does not match arity {}",
                self.input_blocks,
                self.locals.len(),
                f.arity()
            )));
        }
        if self.block_len == 1 {
            self.validate(|x| f.eval(x))
        } else {
            let lift = tensor_lift(f, self.block_len)?;
            self.validate(|x| lift.eval_u64(x))
        }
    }

    /// Largest view size, the sparsity this certificate witnesses.
    pub fn view_size(&self) -> usize {
        self.views.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Lifts a certificate for `f` to one for `f^{⊗n}`: the same block views,
/// with each local applied row by row. Agreement becomes `old^n` exactly;
/// it is recounted whenever `nk` allows.
pub fn amplify_nonrigidity(
    cert: &NonRigidityCertificate,
    f: &BooleanFunction,
    n: usize,
) -> Result<NonRigidityCertificate> {
    if cert.block_len != 1 {
        return Err(Error::InvalidWitness("only single-bit certificates can be amplified".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("lift factor must be at least 1".into()));
    }
    cert.validate_function(f)?;
    let k = f.arity();
    let index_limit = cert.view_size() * n;
    if index_limit > 30 || k * n > 64 {
        return Err(Error::budget("lifted local table bits", index_limit, 30));
    }
    let locals = cert
        .views
        .iter()
        .zip(&cert.locals)
        .map(|(view, local)| {
            let s = view.len();
            (0..1u64 << (s * n))
                .map(|y| {
                    (0..n).fold(0u64, |out, row| {
                        let small = (0..s).fold(0u64, |acc, p| acc | (((y >> (p * n + row)) & 1) << p));
                        out | (local[small as usize] << row)
                    })
                })
                .collect()
        })
        .collect();
    let expected = u32::try_from(n)
        .ok()
        .and_then(|e| cert.agreement_count.checked_pow(e))
        .ok_or_else(|| Error::budget("lifted agreement count", format!("{}^{n}", cert.agreement_count), u64::MAX))?;
    let lifted = NonRigidityCertificate {
        input_blocks: k,
        block_len: n,
        views: cert.views.clone(),
        locals,
        agreement_count: expected,
    };
    lifted.check_shape()?;
    if k * n <= MAX_RECOUNT_BITS {
        lifted.validate_function(f)?;
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;

    // identity read through crossed views: output 1 sees x2 and vice versa
    fn crossed() -> BooleanFunction {
        BooleanFunction::identity(2)
    }

    #[test]
    fn full_agreement_lifts_to_full_agreement() {
        // identity with each output reading its own coordinate
        let id = BooleanFunction::identity(2);
        let cert = NonRigidityCertificate {
            input_blocks: 2,
            block_len: 1,
            views: vec![vec![0], vec![1]],
            locals: vec![vec![0, 1], vec![0, 1]],
            agreement_count: 4,
        };
        cert.validate_function(&id).unwrap();
        let lifted = amplify_nonrigidity(&cert, &id, 3).unwrap();
        assert_eq!(lifted.agreement_count, 64);
        assert_eq!(lifted.views, cert.views);
    }

    #[test]
    fn half_agreement_squares() {
        // copying the seen coordinate: correct iff x1 = x2
        let cert = NonRigidityCertificate {
            input_blocks: 2,
            block_len: 1,
            views: vec![vec![1], vec![0]],
            locals: vec![vec![0, 1], vec![0, 1]],
            agreement_count: 2,
        };
        cert.validate_function(&crossed()).unwrap();
        let lifted = amplify_nonrigidity(&cert, &crossed(), 2).unwrap();
        assert_eq!(lifted.agreement_count, 4);
        assert_eq!(lifted.recount(|x| tensor_lift(&crossed(), 2).unwrap().eval_u64(x)).unwrap(), 4);
    }

    #[test]
    fn rejects_wrong_counts_and_shapes() {
        let mut cert = NonRigidityCertificate {
            input_blocks: 2,
            block_len: 1,
            views: vec![vec![1], vec![0]],
            locals: vec![vec![0, 1], vec![0, 1]],
            agreement_count: 3,
        };
        assert!(cert.validate_function(&crossed()).is_err());
        assert!(amplify_nonrigidity(&cert, &crossed(), 2).is_err());
        cert.agreement_count = 2;
        cert.views[0] = vec![1, 0];
        assert!(cert.check_shape().is_err());
        cert.views[0] = vec![1];
        cert.locals[0] = vec![0, 2];
        assert!(cert.check_shape().is_err());
    }
}
