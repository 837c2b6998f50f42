//! The Tensor_k problem: given the truth table of `f: {0,1}^k -> {0,1}^k`
//! and `x` in block-major order, output `f^{⊗n}(x)`.
//!
//! Input encoding: the `2^k` table entries in ascending input order, each
//! written as `k` bits least significant first, followed by the `nk` bits of
//! `x` (block `j` holds `x_{1j} .. x_{nj}`). Length `m = 2^k k + nk`.
//!
//! The generated machine uses work tapes `T` (table copy), `R` (ruler of
//! length `n`) and `X_1 .. X_k`, one per block:
//!
//! 1. copy the table onto `T`;
//! 2. scan `x`, marking one ruler cell per group of `k` symbols, which
//!    leaves exactly `n` marks;
//! 3. walk back over `x`, copying block `j` onto `X_j` while the ruler head
//!    sweeps its `n` marks, reversing direction between blocks;
//! 4. for each row, read `(x_{i1}, .., x_{ik})` off the `X` heads, sweep `T`
//!    end to end picking up the matching entry, and overwrite the row with
//!    it on the way back (sweeps alternate direction);
//! 5. rewind the `X` heads and print `X_1`, then `X_2`, and so on.
//!
//! With `L = k 2^k` this takes exactly `alpha + beta n` steps where
//! `alpha = L + 2k + 3` and `beta = L + 3k + 3`.

use num_rational::Ratio;
use serde::Serialize;

use super::machine::{MachineBuilder, MachineSpec, Move};
use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::rigidity::function::{tensor_lift, BooleanFunction};

/// Largest `k` the generator accepts by default.
pub const DEFAULT_TENSOR_K_CAP: usize = 4;

/// Input length `2^k k + nk`.
pub fn tensor_input_len(k: usize, n: usize) -> usize {
    (k << k) + n * k
}

pub fn encode_tensor_input(f: &BooleanFunction, x: &BitVector, n: usize) -> Result<Vec<char>> {
    let k = f.arity();
    if x.len() != n * k {
        return Err(Error::LengthMismatch {
            expected: n * k,
            actual: x.len(),
        });
    }
    let bit = |b: bool| if b { '1' } else { '0' };
    let mut out = Vec::with_capacity(tensor_input_len(k, n));
    for &entry in f.table() {
        out.extend((0..k).map(|j| bit((entry >> j) & 1 == 1)));
    }
    out.extend(x.iter().map(bit));
    Ok(out)
}

/// Inverse of [`encode_tensor_input`] for a known `k`.
pub fn decode_tensor_input(symbols: &[char], k: usize) -> Result<(BooleanFunction, BitVector, usize)> {
    if k == 0 || k > crate::rigidity::function::MAX_ARITY {
        return Err(Error::InvalidArgument(format!("unsupported arity {k}")));
    }
    let table_len = k << k;
    if symbols.len() < table_len || (symbols.len() - table_len) % k != 0 {
        return Err(Error::InvalidArgument(format!(
            "length {} is not 2^{k}*{k} plus a multiple of {k}",
            symbols.len()
        )));
    }
    let bits: Vec<bool> = symbols
        .iter()
        .map(|&c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidArgument(format!("unexpected symbol `{other}`"))),
        })
        .collect::<Result<_>>()?;
    let table = bits[..table_len]
        .chunks(k)
        .map(|e| e.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | (u64::from(b) << j)))
        .collect();
    let x = BitVector::from_bools(&bits[table_len..]);
    let n = x.len() / k;
    Ok((BooleanFunction::new(k, table)?, x, n))
}

/// Direct evaluation of `f^{⊗n}(x)`.
pub fn tensor_k_reference(f: &BooleanFunction, x: &BitVector, n: usize) -> Result<BitVector> {
    tensor_lift(f, n)?.eval(x)
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorMachine {
    pub k: usize,
    pub machine: MachineSpec,
    /// Steps are exactly `alpha + beta * n`.
    pub alpha: u64,
    pub beta: u64,
    /// `(alpha + beta) / (k 2^k)`, so steps `<= c_k * n * k * 2^k` for `n >= 1`.
    #[serde(serialize_with = "ratio_string")]
    pub c_k: Ratio<u64>,
}

fn ratio_string<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exact::format_value(r))
}

impl TensorMachine {
    pub fn steps(&self, n: u64) -> u64 {
        self.alpha + self.beta * n
    }
}

const IN: usize = 0;
const T: usize = 2;
const R: usize = 3;

fn x_tape(j: usize) -> usize {
    3 + j
}

struct Gen {
    b: MachineBuilder,
    k: usize,
    readable: usize,
}

impl Gen {
    fn rule(
        &mut self,
        state: &str,
        read: &[(usize, char)],
        next: &str,
        write: &[(usize, char)],
        moves: &[(usize, Move)],
        emit: Option<char>,
    ) {
        let mut r = vec![None; self.readable];
        for &(t, c) in read {
            r[t] = Some(c);
        }
        let mut w = vec![None; self.readable - 2];
        for &(t, c) in write {
            w[t - 2] = Some(c);
        }
        let mut m = vec!['S'; self.readable];
        for &(t, mv) in moves {
            m[t] = match mv {
                Move::L => 'L',
                Move::S => 'S',
                Move::R => 'R',
            };
        }
        let m: String = m.into_iter().collect();
        self.b.rule(state, &r, next, &w, &m, emit);
    }

    fn all_x(&self, mv: Move) -> Vec<(usize, Move)> {
        (1..=self.k).map(|j| (x_tape(j), mv)).collect()
    }
}

fn sym(bit: u64) -> char {
    if bit & 1 == 1 {
        '1'
    } else {
        '0'
    }
}

fn dir_name(d: Move) -> &'static str {
    match d {
        Move::L => "L",
        _ => "R",
    }
}

fn flip(d: Move) -> Move {
    match d {
        Move::L => Move::R,
        _ => Move::L,
    }
}

/// Builds the Tensor_k machine for `k <= cap`.
pub fn gen_tensor_k_machine(k: usize, cap: usize) -> Result<TensorMachine> {
    if k == 0 || k > cap {
        return Err(Error::InvalidArgument(format!("k must be in 1..={cap}, got {k}")));
    }
    let work = k + 2;
    let mut g = Gen {
        b: MachineBuilder::new(work, &['0', '1', 'm', '_'], '_', "t0", "halt")?,
        k,
        readable: 2 + work,
    };
    let l = k << k;
    let entries = 1u64 << k;

    // 1. table copy
    for i in 0..l {
        let next = if i + 1 == l { "m0".to_string() } else { format!("t{}", i + 1) };
        for s in ['0', '1'] {
            g.rule(&format!("t{i}"), &[(IN, s)], &next, &[(T, s)], &[(IN, Move::R), (T, Move::R)], None);
        }
    }

    // 2. ruler
    for c in 0..k {
        let next = format!("m{}", (c + 1) % k);
        for s in ['0', '1'] {
            if c == 0 {
                g.rule(&format!("m{c}"), &[(IN, s)], &next, &[(R, 'm')], &[(IN, Move::R), (R, Move::R)], None);
            } else {
                g.rule(&format!("m{c}"), &[(IN, s)], &next, &[], &[(IN, Move::R)], None);
            }
        }
        let mut moves = g.all_x(Move::L);
        moves.extend([(IN, Move::L), (R, Move::L), (T, Move::L)]);
        g.rule(&format!("m{c}"), &[(IN, '_')], &format!("c{k}L"), &[], &moves, None);
    }

    // 3. deinterleave, last block first
    for j in (1..=k).rev() {
        for d in [Move::L, Move::R] {
            let state = format!("c{j}{}", dir_name(d));
            for s in ['0', '1'] {
                g.rule(
                    &state,
                    &[(R, 'm'), (IN, s)],
                    &state,
                    &[(x_tape(j), s)],
                    &[(IN, Move::L), (x_tape(j), Move::L), (R, d)],
                    None,
                );
            }
            if j > 1 {
                let next = format!("c{}{}", j - 1, dir_name(flip(d)));
                g.rule(&state, &[(R, '_')], &next, &[], &[(R, flip(d))], None);
            } else {
                let moves = g.all_x(Move::R);
                g.rule(&state, &[(R, '_')], "rdL", &[], &moves, None);
            }
        }
    }

    // 4. rows
    let in_entry = |v: u64, c: i64| c >= (v as i64) * k as i64 && c < (v as i64 + 1) * k as i64;
    for d in [Move::L, Move::R] {
        let dn = dir_name(d);
        let step = if d == Move::L { -1i64 } else { 1 };
        let first = if d == Move::L { l as i64 - 1 } else { 0 };
        let sweep_state = |v: u64, c: i64| {
            if in_entry(v, c) {
                format!("cap{dn}_{c}_0")
            } else {
                format!("pre{dn}_{v}_{c}")
            }
        };
        let rd = format!("rd{dn}");
        let moves = g.all_x(Move::L);
        g.rule(&rd, &[(x_tape(1), '_')], "rew", &[], &moves, None);
        for v in 0..entries {
            let read: Vec<(usize, char)> = (1..=k).map(|j| (x_tape(j), sym(v >> (j - 1)))).collect();
            g.rule(&rd, &read, &sweep_state(v, first), &[], &[], None);
            // skip to the entry
            let mut c = first;
            while !in_entry(v, c) {
                g.rule(&format!("pre{dn}_{v}_{c}"), &[], &sweep_state(v, c + step), &[], &[(T, d)], None);
                c += step;
            }
        }
        // pick up the entry bit by bit
        for c in 0..l as i64 {
            let v = c / k as i64;
            let p = c - v * k as i64;
            let captured: u64 = if d == Move::R { (1 << p) - 1 } else { ((1u64 << k) - 1) & !((1 << (p + 1)) - 1) };
            for acc in (0..entries).filter(|a| a & !captured == 0) {
                for s in [0u64, 1] {
                    let acc2 = acc | (s << p);
                    let nc = c + step;
                    let next = if in_entry(v as u64, nc) {
                        format!("cap{dn}_{nc}_{acc2}")
                    } else {
                        format!("post{dn}_{acc2}")
                    };
                    g.rule(&format!("cap{dn}_{c}_{acc}"), &[(T, sym(s))], &next, &[], &[(T, d)], None);
                }
            }
        }
        // run to the end of the table, then write the row back
        for out in 0..entries {
            let state = format!("post{dn}_{out}");
            for s in ['0', '1'] {
                g.rule(&state, &[(T, s)], &state, &[], &[(T, d)], None);
            }
            let writes: Vec<(usize, char)> = (1..=k).map(|j| (x_tape(j), sym(out >> (j - 1)))).collect();
            let mut moves = g.all_x(Move::R);
            moves.push((T, flip(d)));
            g.rule(&state, &[(T, '_')], &format!("rd{}", dir_name(flip(d))), &writes, &moves, None);
        }
    }

    // 5. rewind
    for s in ['0', '1'] {
        let moves = g.all_x(Move::L);
        g.rule("rew", &[(x_tape(1), s)], "rew", &[], &moves, None);
    }
    let moves = g.all_x(Move::R);
    g.rule("rew", &[(x_tape(1), '_')], "dump1", &[], &moves, None);

    // 6. print
    for j in 1..=k {
        let state = format!("dump{j}");
        for s in ['0', '1'] {
            g.rule(&state, &[(x_tape(j), s)], &state, &[], &[(x_tape(j), Move::R)], Some(s));
        }
        let next = if j == k { "halt".to_string() } else { format!("dump{}", j + 1) };
        g.rule(&state, &[(x_tape(j), '_')], &next, &[], &[], None);
    }

    let machine = g.b.finish()?;
    let l = l as u64;
    let k64 = k as u64;
    let alpha = l + 2 * k64 + 3;
    let beta = l + 3 * k64 + 3;
    Ok(TensorMachine {
        k,
        machine,
        alpha,
        beta,
        c_k: Ratio::new(alpha + beta, l),
    })
}
