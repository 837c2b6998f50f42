use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};

/// Largest arity whose truth table we materialize.
pub const MAX_ARITY: usize = 24;

/// A function `{0,1}^k -> {0,1}^k` given by its truth table.
///
/// Entry `x` holds `f(x)`, where input coordinate `j + 1` is bit `j` of the
/// index and output coordinate `j + 1` is bit `j` of the entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    k: usize,
    table: Vec<u64>,
}

impl BooleanFunction {
    pub fn new(k: usize, table: Vec<u64>) -> Result<Self> {
        if k == 0 || k > MAX_ARITY {
            return Err(Error::InvalidArgument(format!(
                "arity must be in 1..={MAX_ARITY}, got {k}"
            )));
        }
        if table.len() != 1 << k {
            return Err(Error::LengthMismatch {
                expected: 1 << k,
                actual: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|&&e| e >> k != 0) {
            return Err(Error::InvalidArgument(format!(
                "table entry {bad} does not fit in {k} bits"
            )));
        }
        Ok(Self { k, table })
    }

    pub fn identity(k: usize) -> Self {
        Self::new(k, (0..1u64 << k).collect()).expect("valid arity")
    }

    pub fn constant(k: usize, value: u64) -> Self {
        Self::new(k, vec![value; 1 << k]).expect("valid constant")
    }

    /// The linear map `x -> A x` for a square matrix `A`.
    pub fn from_matrix(a: &BitMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "linear function needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let k = a.rows();
        if k == 0 || k > MAX_ARITY {
            return Err(Error::InvalidArgument(format!("arity {k} out of range")));
        }
        let table = (0..1u64 << k)
            .map(|x| {
                (0..k).fold(0, |acc, i| {
                    let parity = (a.row_mask(i) & x).count_ones() & 1;
                    acc | (u64::from(parity) << i)
                })
            })
            .collect();
        Self::new(k, table)
    }

    /// The function with index `code` in the enumeration of all
    /// `2^(k 2^k)` functions: entry `x` is bits `x*k .. x*k + k` of `code`.
    pub fn from_code(k: usize, code: u64) -> Result<Self> {
        if k * (1 << k) > 64 {
            return Err(Error::InvalidArgument(format!(
                "functions of arity {k} cannot be indexed by a 64-bit code"
            )));
        }
        let mask = (1u64 << k) - 1;
        let table = (0..1usize << k).map(|x| (code >> (x * k)) & mask).collect();
        Self::new(k, table)
    }

    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let mask = (1u64 << k) - 1;
        let table = (0..1usize << k).map(|_| rng.random::<u64>() & mask).collect();
        Self::new(k, table).expect("valid arity")
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.table[x as usize]
    }

    /// Output coordinate `j + 1` of `f(x)`.
    pub fn output_bit(&self, x: u64, j: usize) -> bool {
        (self.table[x as usize] >> j) & 1 == 1
    }

    /// Parses the truth-table file format: the arity on the first line, then
    /// `2^k` whitespace-separated `k`-character binary strings (coordinate 1
    /// first) in input-index order. `#` starts a comment line.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut k = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if k.is_none() {
                k = Some(
                    line.parse::<usize>()
                        .map_err(|_| Error::parse(i + 1, format!("bad arity {line:?}")))?,
                );
                continue;
            }
            tokens.extend(line.split_whitespace().map(|t| (i + 1, t.to_owned())));
        }
        let k = k.ok_or_else(|| Error::parse(1, "missing arity"))?;
        if k == 0 || k > MAX_ARITY {
            return Err(Error::parse(1, format!("arity {k} out of range")));
        }
        if tokens.len() != 1 << k {
            return Err(Error::parse(
                0,
                format!("expected {} entries, found {}", 1usize << k, tokens.len()),
            ));
        }
        let table = tokens
            .iter()
            .map(|(line, t)| {
                let v: BitVector = t.parse().map_err(|e: Error| Error::parse(*line, e.to_string()))?;
                if v.len() != k {
                    return Err(Error::parse(*line, format!("entry {t:?} is not {k} bits")));
                }
                Ok(v.to_u64())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, table)
    }

    pub fn to_text(&self) -> String {
        let entries: Vec<String> = self
            .table
            .iter()
            .map(|&e| BitVector::from_u64(self.k, e).to_string())
            .collect();
        format!("{}\n{}\n", self.k, entries.join(" "))
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(k={}, {:?})", self.k, self.table)
    }
}

/// Gathers the bits of `x` at `positions` (ascending) into a compact index,
/// first position in the least significant bit.
pub fn restrict(x: u64, positions: &[usize]) -> u64 {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (m, &p)| acc | (((x >> p) & 1) << m))
}

/// A view family `S = (S_1, ..., S_k)`: one size-`s` subset of the `k`
/// coordinates per player. Indices are 0-based and each set is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ViewFamily {
    k: usize,
    s: usize,
    sets: Vec<Vec<usize>>,
}

impl ViewFamily {
    pub fn new(k: usize, s: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if s == 0 || s >= k {
            return Err(Error::InvalidArgument(format!(
                "view size must satisfy 1 <= s < k, got s={s}, k={k}"
            )));
        }
        if sets.len() != k {
            return Err(Error::InvalidArgument(format!(
                "expected {k} view sets, got {}",
                sets.len()
            )));
        }
        let mut normalized = Vec::with_capacity(k);
        for set in sets {
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            if set.len() != s || set.iter().any(|&i| i >= k) {
                return Err(Error::InvalidArgument(format!(
                    "view set {set:?} must hold {s} distinct indices below {k}"
                )));
            }
            normalized.push(set);
        }
        Ok(Self {
            k,
            s,
            sets: normalized,
        })
    }

    /// Like [`ViewFamily::new`], but sets smaller than `s` are filled up with
    /// the smallest indices they do not already contain.
    pub fn padded(k: usize, s: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let sets = sets
            .into_iter()
            .map(|set| pad_set(set, s, k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, s, sets)
    }

    /// Every view family for `(k, s)` in lexicographic order: sets compared
    /// elementwise, families compared set by set.
    pub fn all(k: usize, s: usize) -> Result<Vec<ViewFamily>> {
        if s == 0 || s >= k {
            return Err(Error::InvalidArgument(format!(
                "view size must satisfy 1 <= s < k, got s={s}, k={k}"
            )));
        }
        let combos = combinations(k, s);
        let count = family_count(k, s).ok_or_else(|| {
            Error::budget("view families", format!("C({k},{s})^{k}"), usize::MAX)
        })?;
        let mut out = Vec::with_capacity(count);
        let mut digits = vec![0usize; k];
        loop {
            out.push(Self {
                k,
                s,
                sets: digits.iter().map(|&d| combos[d].clone()).collect(),
            });
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < combos.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }
}

impl fmt::Display for ViewFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sets
            .iter()
            .map(|s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

pub(crate) fn pad_set(mut set: Vec<usize>, size: usize, universe: usize) -> Result<Vec<usize>> {
    set.sort_unstable();
    set.dedup();
    if set.len() > size || set.iter().any(|&i| i >= universe) {
        return Err(Error::InvalidArgument(format!(
            "set {set:?} does not fit in {size} indices below {universe}"
        )));
    }
    let mut fill = 0;
    while set.len() < size {
        if !set.contains(&fill) {
            set.push(fill);
        }
        fill += 1;
    }
    set.sort_unstable();
    Ok(set)
}

/// `C(k, s)^k`, or `None` on overflow.
pub fn family_count(k: usize, s: usize) -> Option<usize> {
    binomial(k, s)?.checked_pow(u32::try_from(k).ok()?)
}

pub(crate) fn binomial(n: usize, r: usize) -> Option<usize> {
    if r > n {
        return Some(0);
    }
    let mut acc: usize = 1;
    for i in 0..r.min(n - r) {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// All size-`s` subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, s, &mut Vec::with_capacity(s), &mut out);
    out
}

/// Evaluator for the tensor lift `f^{⊗n}` on block-major vectors of length
/// `nk`: row `i` of the input is `(x_{i,1}, ..., x_{i,k})`, stored at
/// positions `i, n + i, ..., (k-1) n + i`, and the lift applies `f` to every
/// row in place.
#[derive(Debug, Clone)]
pub struct TensorLift<'a> {
    f: &'a BooleanFunction,
    n: usize,
}

pub fn tensor_lift(f: &BooleanFunction, n: usize) -> Result<TensorLift<'_>> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor lift needs n >= 1".into()));
    }
    Ok(TensorLift { f, n })
}

impl TensorLift<'_> {
    pub fn input_len(&self) -> usize {
        self.n * self.f.arity()
    }

    pub fn eval(&self, x: &BitVector) -> Result<BitVector> {
        let (n, k) = (self.n, self.f.arity());
        if x.len() != n * k {
            return Err(Error::LengthMismatch {
                expected: n * k,
                actual: x.len(),
            });
        }
        let mut out = BitVector::zeros(n * k);
        for i in 0..n {
            let row = (0..k).fold(0u64, |acc, j| acc | (u64::from(x.get(j * n + i)) << j));
            let image = self.f.eval(row);
            for j in 0..k {
                out.set(j * n + i, (image >> j) & 1 == 1);
            }
        }
        Ok(out)
    }

    /// Same as [`TensorLift::eval`] for inputs of at most 64 bits.
    pub fn eval_u64(&self, x: u64) -> u64 {
        let (n, k) = (self.n, self.f.arity());
        debug_assert!(n * k <= 64);
        let mut out = 0;
        for i in 0..n {
            let row = (0..k).fold(0u64, |acc, j| acc | (((x >> (j * n + i)) & 1) << j));
            let image = self.f.eval(row);
            for j in 0..k {
                out |= ((image >> j) & 1) << (j * n + i);
            }
        }
        out
    }
}
