//! Depth-2 circuits with arbitrary gates, and the two conversions between
//! them and low-rank plus sparse decompositions.
//!
//! A circuit has `w` middle gates, each an arbitrary function of all inputs,
//! and one output gate per output bit reading its direct input wires `D_i`
//! and every middle gate. Output gate tables are indexed by the direct bits
//! (in `D_i` order, least significant first) followed by the `w` middle bits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::certificate::NonRigidityCertificate;
use super::function::pad_set;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};

/// Largest input count for exhaustive evaluation over all inputs.
pub const MAX_CIRCUIT_INPUTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputGate {
    pub direct: Vec<usize>,
    pub table: BitVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Depth2Circuit {
    pub n_in: usize,
    /// Truth tables of the middle gates over all `2^n_in` inputs.
    pub middle: Vec<BitVector>,
    pub outputs: Vec<OutputGate>,
}

impl Depth2Circuit {
    pub fn new(n_in: usize, middle: Vec<BitVector>, outputs: Vec<OutputGate>) -> Result<Self> {
        if n_in > MAX_CIRCUIT_INPUTS {
            return Err(Error::budget("circuit inputs", n_in, MAX_CIRCUIT_INPUTS));
        }
        if middle.len() > 63 || outputs.len() > 64 {
            return Err(Error::InvalidArgument("at most 63 middle gates and 64 outputs".into()));
        }
        if let Some(bad) = middle.iter().find(|h| h.len() != 1 << n_in) {
            return Err(Error::LengthMismatch {
                expected: 1 << n_in,
                actual: bad.len(),
            });
        }
        for gate in &outputs {
            if gate.direct.iter().any(|&d| d >= n_in) {
                return Err(Error::InvalidArgument(format!("direct wires {:?} out of range", gate.direct)));
            }
            let arity = gate.direct.len() + middle.len();
            if arity > 30 || gate.table.len() != 1 << arity {
                return Err(Error::LengthMismatch {
                    expected: 1usize.checked_shl(arity as u32).unwrap_or(0),
                    actual: gate.table.len(),
                });
            }
        }
        Ok(Self { n_in, middle, outputs })
    }

    pub fn width(&self) -> usize {
        self.middle.len()
    }

    pub fn degree(&self) -> usize {
        self.outputs.iter().map(|g| g.direct.len()).max().unwrap_or(0)
    }

    /// Middle-layer values at `x`, gate `t` in bit `t`.
    pub fn middle_values(&self, x: u64) -> u64 {
        self.middle
            .iter()
            .enumerate()
            .fold(0, |acc, (t, h)| acc | (u64::from(h.get(x as usize)) << t))
    }

    fn gate_index(gate: &OutputGate, x: u64, h: u64) -> usize {
        let direct = gate
            .direct
            .iter()
            .enumerate()
            .fold(0u64, |acc, (p, &d)| acc | (((x >> d) & 1) << p));
        (direct | (h << gate.direct.len())) as usize
    }

    /// Output bits at `x`, output `i` in bit `i`.
    pub fn eval(&self, x: u64) -> u64 {
        let h = self.middle_values(x);
        self.outputs
            .iter()
            .enumerate()
            .fold(0, |acc, (i, g)| acc | (u64::from(g.table.get(Self::gate_index(g, x, h))) << i))
    }
}

/// Factors `B = B1 B2` with inner dimension `rank(B)`: `B2` is the reduced
/// row echelon form and `B1` reads off each row's pivot-column entries.
pub fn rank_factor(b: &BitMatrix, r: usize) -> Result<(BitMatrix, BitMatrix)> {
    let (reduced, pivots) = b.row_echelon();
    if pivots.len() > r {
        return Err(Error::RankExceeded {
            rank: pivots.len(),
            bound: r,
        });
    }
    let b1 = BitMatrix::from_fn(b.rows(), pivots.len(), |i, t| b.get(i, pivots[t]));
    Ok((b1, reduced))
}

fn parity(x: u64) -> bool {
    x.count_ones() % 2 == 1
}

/// Circuit computing `x -> A x` from `A = B1 B2 + C`: middle gates are the
/// rows of `B2`, output `i` adds `B1` row `i` of the middle values to the
/// parity of its direct wires, the support of `C` row `i`.
pub fn depth2_from_decomposition(
    a: &BitMatrix,
    b1: &BitMatrix,
    b2: &BitMatrix,
    c: &BitMatrix,
) -> Result<Depth2Circuit> {
    let recomposed = b1.try_mul(b2)?.try_add(c)?;
    if &recomposed != a {
        return Err(Error::InvalidWitness("B1 B2 + C differs from A".into()));
    }
    let n_in = a.cols();
    if n_in > MAX_CIRCUIT_INPUTS {
        return Err(Error::budget("circuit inputs", n_in, MAX_CIRCUIT_INPUTS));
    }
    let w = b2.rows();
    let middle = (0..w)
        .map(|t| {
            let row = b2.row_mask(t);
            let bits: Vec<bool> = (0..1u64 << n_in).map(|x| parity(row & x)).collect();
            BitVector::from_bools(&bits)
        })
        .collect();
    let outputs = (0..a.rows())
        .map(|i| {
            let direct: Vec<usize> = (0..n_in).filter(|&j| c.get(i, j)).collect();
            let d = direct.len();
            let mix = if w == 0 { 0 } else { b1.row_mask(i) };
            let bits: Vec<bool> = (0..1u64 << (d + w))
                .map(|idx| parity(idx & ((1 << d) - 1)) ^ parity((idx >> d) & mix))
                .collect();
            OutputGate {
                direct,
                table: BitVector::from_bools(&bits),
            }
        })
        .collect();
    Depth2Circuit::new(n_in, middle, outputs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Depth2Certificate {
    pub certificate: NonRigidityCertificate,
    pub fiber_size: u64,
    pub fiber_value: u64,
    pub width: usize,
    pub degree: usize,
}

/// Fixes the middle layer to its most common value (smallest on ties); on
/// that fiber every output depends only on its direct wires, which gives a
/// certificate with views of size `degree` agreeing on at least
/// `2^(n_in - w)` inputs.
pub fn nonrigidity_from_depth2(circuit: &Depth2Circuit) -> Result<Depth2Certificate> {
    let n_in = circuit.n_in;
    let mut fibers: BTreeMap<u64, u64> = BTreeMap::new();
    for x in 0..1u64 << n_in {
        *fibers.entry(circuit.middle_values(x)).or_default() += 1;
    }
    let (&fiber_value, &fiber_size) = fibers
        .iter()
        .fold(None, |best: Option<(&u64, &u64)>, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        })
        .expect("at least one input");
    let d = circuit.degree().min(n_in);
    let mut views = Vec::with_capacity(circuit.outputs.len());
    let mut locals = Vec::with_capacity(circuit.outputs.len());
    for gate in &circuit.outputs {
        let view = pad_set(gate.direct.clone(), d, n_in)?;
        let local = (0..1u64 << view.len())
            .map(|y| {
                let x = view.iter().enumerate().fold(0u64, |acc, (p, &v)| acc | (((y >> p) & 1) << v));
                u64::from(gate.table.get(Depth2Circuit::gate_index(gate, x, fiber_value)))
            })
            .collect();
        views.push(view);
        locals.push(local);
    }
    let mut certificate = NonRigidityCertificate {
        input_blocks: n_in,
        block_len: 1,
        views,
        locals,
        agreement_count: 0,
    };
    certificate.agreement_count = certificate.recount(|x| circuit.eval(x))?;
    Ok(Depth2Certificate {
        certificate,
        fiber_size,
        fiber_value,
        width: circuit.width(),
        degree: circuit.degree(),
    })
}
