//! Bit-packed vectors and matrices over the two-element field.
//!
//! Bit conventions used by every module in the crate: coordinate 1 of a
//! vector (equivalently input index 1 of a truth table, or the first bit of
//! a view assignment) is stored at the least significant position. Bit
//! strings are written with coordinate 1 first, so `"100"` is the vector
//! `e_1` and has integer value `1`.
//!
//! Vectors of length `nk` split into `k` blocks of `n` bits are stored
//! block-major: block `j` occupies positions `j*n .. (j+1)*n`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Parses a string of ASCII `0`/`1`, coordinate 1 first.
fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidArgument(format!(
                "expected 0 or 1, found {other:?}"
            ))),
        })
        .collect()
}

/// A vector in `F2^len`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector of at most 64 bits from its integer value.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value & tail_mask(len);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.random();
        }
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at 0-based position `i` (coordinate `i + 1`).
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    /// Integer value of a vector of at most 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn dot(&self, other: &BitVector) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones % 2 == 1)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::from_bools(&parse_bits(s.trim())?))
    }
}

impl Serialize for BitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coordinates of an `nk`-bit vector grouped into `k` blocks of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLayout {
    pub n: usize,
    pub k: usize,
}

impl BlockLayout {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!(
                "block layout needs n >= 1 and k >= 1, got n={n}, k={k}"
            )));
        }
        Ok(Self { n, k })
    }

    pub fn total(&self) -> usize {
        self.n * self.k
    }

    /// Position of coordinate `(i, j)` (row `i` inside block `j`, both 0-based).
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }
}

/// Storage order used by [`BitMatrix::serialize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    RowMajor,
    ColumnMajor,
}

/// A dense matrix over F2, each row packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from row strings such as `["110", "011"]`.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| parse_bits(r.as_ref()))
            .collect::<Result<_>>()?;
        let cols = parsed.first().map_or(0, Vec::len);
        if let Some(bad) = parsed.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "ragged rows: expected {cols} columns, found {}",
                bad.len()
            )));
        }
        Ok(Self::from_fn(parsed.len(), cols, |i, j| parsed[i][j]))
    }

    /// Matrix with at most 64 columns from per-row integer masks.
    pub fn from_row_masks(cols: usize, masks: &[u64]) -> Self {
        assert!(cols <= WORD);
        let mut m = Self::zeros(masks.len(), cols);
        if cols > 0 {
            for (i, &mask) in masks.iter().enumerate() {
                m.data[i] = mask & tail_mask(cols);
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            let row = m.row_words_mut(i);
            for w in row.iter_mut() {
                *w = rng.random();
            }
            if let Some(last) = row.last_mut() {
                *last &= tail_mask(cols);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// Row `i` as an integer mask; only valid for matrices with at most 64 columns.
    pub fn row_mask(&self, i: usize) -> u64 {
        assert!(self.cols <= WORD, "row_mask needs at most 64 columns");
        if self.cols == 0 {
            0
        } else {
            self.data[i]
        }
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Rank over F2 by row reduction.
    pub fn rank(&self) -> usize {
        self.row_echelon().1.len()
    }

    /// Reduced row echelon form with the pivot column of each nonzero row.
    /// The returned matrix keeps only the nonzero rows.
    pub fn row_echelon(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row_words(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let (w, bit) = (col / WORD, 1u64 << (col % WORD));
            let Some(p) = (next..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row[w] & bit != 0 {
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        let mut reduced = BitMatrix::zeros(next, self.cols);
        for (i, row) in rows.into_iter().take(next).enumerate() {
            reduced.row_words_mut(i).copy_from_slice(&row);
        }
        (reduced, pivots)
    }

    /// Entrywise sum over F2.
    pub fn try_add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Matrix product over F2.
    pub fn try_mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if self.get(i, l) {
                    let src = other.row_words(l).to_vec();
                    for (a, b) in out.row_words_mut(i).iter_mut().zip(&src) {
                        *a ^= b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            let parity = self
                .row_words(i)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            out.set(i, parity % 2 == 1);
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// `A ⊗ I_n` in block-major order: the `(i, j)` block of the result is
    /// `A_ij · I_n`.
    pub fn kron_identity(&self, n: usize) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "kron_identity needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("kron_identity needs n >= 1".into()));
        }
        let k = self.rows;
        let mut out = BitMatrix::zeros(n * k, n * k);
        for bi in 0..k {
            for bj in 0..k {
                if self.get(bi, bj) {
                    for r in 0..n {
                        out.set(bi * n + r, bj * n + r, true);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest number of ones in a row.
    pub fn row_sparsity(&self) -> usize {
        (0..self.rows).map(|i| self.row_weight(i)).max().unwrap_or(0)
    }

    /// Largest number of nonzero `n x n` blocks in a block-row.
    pub fn block_row_sparsity(&self, layout: BlockLayout) -> Result<usize> {
        let total = layout.total();
        if self.rows != total || self.cols != total {
            return Err(Error::DimensionMismatch(format!(
                "layout n={}, k={} needs a {total}x{total} matrix, got {}x{}",
                layout.n, layout.k, self.rows, self.cols
            )));
        }
        let n = layout.n;
        let mut worst = 0;
        for bi in 0..layout.k {
            let nonzero = (0..layout.k)
                .filter(|&bj| {
                    (0..n).any(|r| (0..n).any(|c| self.get(bi * n + r, bj * n + c)))
                })
                .count();
            worst = worst.max(nonzero);
        }
        Ok(worst)
    }

    pub fn serialize(&self, order: Order) -> String {
        let mut s = String::with_capacity(self.rows * self.cols);
        match order {
            Order::RowMajor => {
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        s.push(if self.get(i, j) { '1' } else { '0' });
                    }
                }
            }
            Order::ColumnMajor => {
                for j in 0..self.cols {
                    for i in 0..self.rows {
                        s.push(if self.get(i, j) { '1' } else { '0' });
                    }
                }
            }
        }
        s
    }

    pub fn deserialize(rows: usize, cols: usize, bits: &str, order: Order) -> Result<BitMatrix> {
        let bits = parse_bits(bits.trim())?;
        if bits.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                actual: bits.len(),
            });
        }
        Ok(match order {
            Order::RowMajor => BitMatrix::from_fn(rows, cols, |i, j| bits[i * cols + j]),
            Order::ColumnMajor => BitMatrix::from_fn(rows, cols, |i, j| bits[j * rows + i]),
        })
    }

    /// Parses the text format: a `rows cols` header line followed by one
    /// line of `0`/`1` characters per row. Blank lines and `#` comments are
    /// ignored.
    pub fn parse_text(text: &str) -> Result<BitMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(hline, format!("bad dimension {t:?}"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::parse(hline, "header must be `rows cols`"));
        };
        let mut m = BitMatrix::zeros(rows, cols);
        if cols == 0 {
            // rows of width zero are empty lines, which are skipped above
            return match lines.next() {
                Some((lineno, _)) => Err(Error::parse(lineno, "expected 0 columns")),
                None => Ok(m),
            };
        }
        let mut seen = 0;
        for (lineno, line) in lines {
            if seen == rows {
                return Err(Error::parse(lineno, "more rows than declared"));
            }
            let bits = parse_bits(line).map_err(|e| Error::parse(lineno, e.to_string()))?;
            if bits.len() != cols {
                return Err(Error::parse(
                    lineno,
                    format!("expected {cols} columns, found {}", bits.len()),
                ));
            }
            for (j, b) in bits.into_iter().enumerate() {
                m.set(seen, j, b);
            }
            seen += 1;
        }
        if seen != rows {
            return Err(Error::parse(0, format!("expected {rows} rows, found {seen}")));
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Serialized as `{"rows": r, "cols": c, "bits": "<row-major bit string>"}`.
impl Serialize for BitMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            bits: self.serialize(Order::RowMajor),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        BitMatrix::deserialize(repr.rows, repr.cols, &repr.bits, Order::RowMajor)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    bits: String,
}

/// Incrementally maintained row space, used by the rigidity searches to
/// prune as soon as a partial low-rank candidate already exceeds its bound.
/// Rows are at most 64 bits wide.
#[derive(Debug, Clone, Default)]
pub(crate) struct RowSpace {
    // basis vectors keyed by their highest set bit
    basis: Vec<u64>,
}

impl RowSpace {
    pub(crate) fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Inserts `v`; returns whether the rank grew.
    pub(crate) fn insert(&mut self, mut v: u64) -> bool {
        for &b in &self.basis {
            let top = 63 - b.leading_zeros();
            if (v >> top) & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            return false;
        }
        // keep basis in strictly decreasing order of leading bit
        let top = 63 - v.leading_zeros();
        let pos = self
            .basis
            .iter()
            .position(|&b| 63 - b.leading_zeros() < top)
            .unwrap_or(self.basis.len());
        self.basis.insert(pos, v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(BitMatrix::ones(3, 3).rank(), 1);
        assert_eq!(m(&["110", "011", "101"]).rank(), 2);
    }

    #[test]
    fn add_examples() {
        let a = m(&["101", "011", "110"]);
        assert!(a.try_add(&a).unwrap().is_zero());
        assert_eq!(a.try_add(&BitMatrix::zeros(3, 3)).unwrap(), a);
        let s = BitMatrix::identity(2).try_add(&BitMatrix::ones(2, 2)).unwrap();
        assert_eq!(s, m(&["01", "10"]));
        assert!(matches!(
            a.try_add(&BitMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn mul_examples() {
        let a = m(&["101", "011", "110"]);
        assert_eq!(BitMatrix::identity(3).try_mul(&a).unwrap(), a);
        assert!(a.try_mul(&BitMatrix::zeros(3, 3)).unwrap().is_zero());
        // [[1,1],[0,1]]·[[1,0],[1,1]]: row 1 = (1+1, 0+1), row 2 = (1, 1)
        let p = m(&["11", "01"]).try_mul(&m(&["10", "11"])).unwrap();
        assert_eq!(p, m(&["01", "11"]));
        assert!(a.try_mul(&BitMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn kron_identity_examples() {
        assert_eq!(m(&["1"]).kron_identity(3).unwrap(), BitMatrix::identity(3));
        assert_eq!(BitMatrix::identity(3).kron_identity(2).unwrap(), BitMatrix::identity(6));
        // swap ⊗ I_2 exchanges the two 2-blocks: entry (r, c) is 1 iff c = r ± 2
        let swap = m(&["01", "10"]).kron_identity(2).unwrap();
        assert_eq!(swap, m(&["0010", "0001", "1000", "0100"]));
        assert!(m(&["10"]).kron_identity(2).is_err());
    }

    #[test]
    fn sparsity_examples() {
        assert_eq!(BitMatrix::identity(4).row_sparsity(), 1);
        assert_eq!(BitMatrix::zeros(4, 4).row_sparsity(), 0);
        assert_eq!(BitMatrix::ones(3, 3).row_sparsity(), 3);

        let layout = BlockLayout::new(2, 3).unwrap();
        assert_eq!(BitMatrix::identity(6).block_row_sparsity(layout).unwrap(), 1);
        assert_eq!(BitMatrix::zeros(6, 6).block_row_sparsity(layout).unwrap(), 0);
        let full = BitMatrix::ones(3, 3).kron_identity(2).unwrap();
        assert_eq!(full.block_row_sparsity(layout).unwrap(), 3);
        assert!(BitMatrix::identity(5).block_row_sparsity(layout).is_err());
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(BitMatrix::identity(2).serialize(Order::RowMajor), "1001");
        let a = m(&["110", "001", "010"]);
        assert_eq!(a.serialize(Order::ColumnMajor), a.transpose().serialize(Order::RowMajor));
        assert!(BitMatrix::deserialize(2, 2, "101", Order::RowMajor).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let a = m(&["110", "001"]);
        let text = a.to_text();
        assert_eq!(text, "2 3\n110\n001\n");
        assert_eq!(BitMatrix::parse_text(&text).unwrap(), a);
        assert!(BitMatrix::parse_text("2 2\n10\n").is_err());
        assert!(BitMatrix::parse_text("2 2\n10\n1\n").is_err());
        assert!(BitMatrix::parse_text("1 2\n1x\n").is_err());
    }

    #[test]
    fn wide_matrices_span_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = BitMatrix::random(70, 130, &mut rng);
        let t = a.transpose();
        assert_eq!(a.rank(), t.rank());
        assert_eq!(t.transpose(), a);
        let x = BitVector::random(130, &mut rng);
        let y = a.mul_vec(&x).unwrap();
        for i in 0..70 {
            assert_eq!(y.get(i), a.row(i).dot(&x).unwrap());
        }
    }

    #[test]
    fn bit_vector_conventions() {
        let v: BitVector = "100".parse().unwrap();
        assert_eq!(v.to_u64(), 1);
        assert_eq!(BitVector::from_u64(3, 6).to_string(), "011");
    }

    #[test]
    fn row_space_tracks_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = BitMatrix::random(6, 7, &mut rng);
            let mut space = RowSpace::default();
            for i in 0..6 {
                space.insert(a.row_mask(i));
            }
            assert_eq!(space.rank(), a.rank());
        }
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max, 1..=max, any::<u64>()).prop_map(|(r, c, seed)| {
            BitMatrix::random(r, c, &mut ChaCha8Rng::seed_from_u64(seed))
        })
    }

    proptest! {
        #[test]
        fn rank_bounds(a in arb_matrix(9), seed in any::<u64>()) {
            let b = BitMatrix::random(a.rows(), a.cols(), &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert!(a.rank() <= a.rows().min(a.cols()));
            prop_assert!(a.try_add(&b).unwrap().rank() <= a.rank() + b.rank());
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn kron_rank_scales(seed in any::<u64>(), k in 1usize..=4, n in 1usize..=4) {
            let a = BitMatrix::random(k, k, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(a.kron_identity(n).unwrap().rank(), n * a.rank());
        }

        #[test]
        fn serialize_round_trip(a in arb_matrix(8)) {
            for order in [Order::RowMajor, Order::ColumnMajor] {
                let s = a.serialize(order);
                prop_assert_eq!(BitMatrix::deserialize(a.rows(), a.cols(), &s, order).unwrap(), a.clone());
            }
            prop_assert_eq!(a.serialize(Order::ColumnMajor), a.transpose().serialize(Order::RowMajor));
        }
    }
}
