use super::game::{IndependentGame, MAX_QUESTION_BITS};
use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::rigidity::function::{BooleanFunction, ViewFamily};

/// The game `G_S` for `f`: `k` uniform bits, player `j` sees `x|_{S_j}` and
/// must answer coordinate `j` of `f(x)`.
pub fn build_gs(f: &BooleanFunction, views: &ViewFamily) -> Result<IndependentGame> {
    let k = f.arity();
    if views.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "view family over {} coordinates, function has arity {k}",
            views.k()
        )));
    }
    IndependentGame::from_fn(k, views.sets().to_vec(), 1, |j, x| (f.eval(x) >> j) & 1)
}

/// The `n`-fold parallel repetition.
///
/// Question bit `l` of copy `i` sits at position `l * n + i` (block-major,
/// matching the tensor-lift layout), and answer bit `b` of copy `i` at
/// `b * n + i`. Each player sees its original bits in every copy and wins
/// only if all copies are answered correctly.
pub fn repeat(game: &IndependentGame, n: usize) -> Result<IndependentGame> {
    if n == 0 {
        return Err(Error::InvalidArgument("repetition count must be at least 1".into()));
    }
    let t = game.question_bits();
    let bits = t * n;
    if bits > MAX_QUESTION_BITS {
        return Err(Error::budget("repeated question bits", bits, MAX_QUESTION_BITS));
    }
    let a = game.answer_len();
    if a * n > 64 {
        return Err(Error::budget("repeated answer bits", a * n, 64));
    }
    let views = game
        .views()
        .iter()
        .map(|v| v.iter().flat_map(|&l| (0..n).map(move |i| l * n + i)).collect())
        .collect();
    IndependentGame::from_fn(bits, views, a * n, |j, x| {
        let mut answer = 0;
        for i in 0..n {
            let copy = (0..t).fold(0u64, |acc, l| acc | (((x >> (l * n + i)) & 1) << l));
            let target = game.target(j, copy);
            for b in 0..a {
                answer |= ((target >> b) & 1) << (b * n + i);
            }
        }
        answer
    })
}

/// Adds a player who sees every question bit and must always answer `0`.
pub fn add_observer_player(game: &IndependentGame) -> Result<IndependentGame> {
    let mut views = game.views().to_vec();
    views.push((0..game.question_bits()).collect());
    let mut targets = game.targets().to_vec();
    targets.push(vec![0; game.questions() as usize]);
    IndependentGame::new(game.question_bits(), views, game.answer_len(), targets)
}

fn check_row_family(n: usize, sets: &[Vec<usize>], what: &str) -> Result<ViewFamily> {
    let s = sets.first().map_or(0, Vec::len);
    ViewFamily::new(n, s, sets.to_vec())
        .map_err(|e| Error::InvalidArgument(format!("{what}: {e}")))
}

/// Matrix-transpose game: the question is `X` (row-major, bit `r*n + c`),
/// player `j` sees the rows in `S_j` and must answer column `j` of `X`
/// (row `r` of the column in answer bit `r`).
pub fn build_transpose_game(n: usize, rows_seen: &[Vec<usize>]) -> Result<IndependentGame> {
    let family = check_row_family(n, rows_seen, "transpose game views")?;
    let views = family
        .sets()
        .iter()
        .map(|rows| rows.iter().flat_map(|&r| (0..n).map(move |c| r * n + c)).collect())
        .collect();
    IndependentGame::from_fn(n * n, views, n, |j, x| {
        (0..n).fold(0, |acc, r| acc | (((x >> (r * n + j)) & 1) << r))
    })
}

/// Matrix-product game: the question is `(X, Y)` with `X` in bits
/// `0..n^2` and `Y` in bits `n^2..2n^2`, both row-major. Player `j` sees
/// rows `S_j` of `X` and rows `T_j` of `Y` and must answer row `j` of `XY`
/// over F2.
pub fn build_product_game(
    n: usize,
    x_rows: &[Vec<usize>],
    y_rows: &[Vec<usize>],
) -> Result<IndependentGame> {
    let xs = check_row_family(n, x_rows, "product game X views")?;
    let ys = check_row_family(n, y_rows, "product game Y views")?;
    let nn = n * n;
    let views = xs
        .sets()
        .iter()
        .zip(ys.sets())
        .map(|(sx, sy)| {
            let mut v: Vec<usize> = sx.iter().flat_map(|&r| (0..n).map(move |c| r * n + c)).collect();
            v.extend(sy.iter().flat_map(|&r| (0..n).map(move |c| nn + r * n + c)));
            v
        })
        .collect();
    IndependentGame::from_fn(2 * nn, views, n, |j, q| product_row(n, q, j))
}

/// Row `j` of `XY` for a packed `(X, Y)` question.
fn product_row(n: usize, q: u64, j: usize) -> u64 {
    let nn = n * n;
    let mut row = 0;
    for l in 0..n {
        if (q >> (j * n + l)) & 1 == 1 {
            row ^= (q >> (nn + l * n)) & ((1 << n) - 1);
        }
    }
    row
}

/// Unpacks a product-game question into `(X, Y)`.
pub fn product_question_matrices(n: usize, q: u64) -> (BitMatrix, BitMatrix) {
    let nn = n * n;
    let x = BitMatrix::from_fn(n, n, |r, c| (q >> (r * n + c)) & 1 == 1);
    let y = BitMatrix::from_fn(n, n, |r, c| (q >> (nn + r * n + c)) & 1 == 1);
    (x, y)
}
