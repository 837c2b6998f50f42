use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fraction_of_pow2, Value};
use crate::rigidity::function::restrict;

/// Largest number of question bits for which targets are materialized.
pub const MAX_QUESTION_BITS: usize = 22;

/// An independent game with uniform question bits.
///
/// The verifier draws `t` uniform bits `x`. Player `j` sees the bits at
/// `views[j]` and answers `answer_len` bits; the players win iff every
/// player `j` answers exactly `targets[j][x]`. Targets are total maps, so
/// each question fixes a unique correct answer per player.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentGame {
    question_bits: usize,
    views: Vec<Vec<usize>>,
    answer_len: usize,
    targets: Vec<Vec<u64>>,
}

impl IndependentGame {
    pub fn new(
        question_bits: usize,
        views: Vec<Vec<usize>>,
        answer_len: usize,
        targets: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if question_bits > MAX_QUESTION_BITS {
            return Err(Error::budget("question bits", question_bits, MAX_QUESTION_BITS));
        }
        if views.is_empty() {
            return Err(Error::InvalidArgument("a game needs at least one player".into()));
        }
        if answer_len == 0 || answer_len > 64 {
            return Err(Error::InvalidArgument(format!(
                "answer length must be in 1..=64, got {answer_len}"
            )));
        }
        if targets.len() != views.len() {
            return Err(Error::InvalidArgument(format!(
                "{} players but {} target tables",
                views.len(),
                targets.len()
            )));
        }
        let mut normalized = Vec::with_capacity(views.len());
        for view in views {
            let mut view = view;
            view.sort_unstable();
            view.dedup();
            if view.iter().any(|&b| b >= question_bits) {
                return Err(Error::InvalidArgument(format!(
                    "view {view:?} refers to bits outside 0..{question_bits}"
                )));
            }
            normalized.push(view);
        }
        let questions = 1usize << question_bits;
        let answer_mask = mask(answer_len);
        for (j, table) in targets.iter().enumerate() {
            if table.len() != questions {
                return Err(Error::LengthMismatch {
                    expected: questions,
                    actual: table.len(),
                });
            }
            if table.iter().any(|&a| a & !answer_mask != 0) {
                return Err(Error::InvalidArgument(format!(
                    "player {j} has a target wider than {answer_len} bits"
                )));
            }
        }
        Ok(Self {
            question_bits,
            views: normalized,
            answer_len,
            targets,
        })
    }

    /// Builds the target tables from a closure `(player, question) -> answer`.
    pub fn from_fn(
        question_bits: usize,
        views: Vec<Vec<usize>>,
        answer_len: usize,
        target: impl Fn(usize, u64) -> u64,
    ) -> Result<Self> {
        if question_bits > MAX_QUESTION_BITS {
            return Err(Error::budget("question bits", question_bits, MAX_QUESTION_BITS));
        }
        let targets = (0..views.len())
            .map(|j| (0..1u64 << question_bits).map(|x| target(j, x)).collect())
            .collect();
        Self::new(question_bits, views, answer_len, targets)
    }

    pub fn question_bits(&self) -> usize {
        self.question_bits
    }

    pub fn questions(&self) -> u64 {
        1 << self.question_bits
    }

    pub fn players(&self) -> usize {
        self.views.len()
    }

    pub fn answer_len(&self) -> usize {
        self.answer_len
    }

    pub fn views(&self) -> &[Vec<usize>] {
        &self.views
    }

    pub fn view(&self, player: usize) -> &[usize] {
        &self.views[player]
    }

    pub fn target(&self, player: usize, question: u64) -> u64 {
        self.targets[player][question as usize]
    }

    pub fn targets(&self) -> &[Vec<u64>] {
        &self.targets
    }

    /// Index of player `j`'s view of `question`: the viewed bits in
    /// ascending order, first in the least significant position.
    pub fn view_index(&self, player: usize, question: u64) -> u64 {
        restrict(question, &self.views[player])
    }

    /// Strategy-table size of player `j`, `2^|view_j|`.
    pub fn table_len(&self, player: usize) -> usize {
        1 << self.views[player].len()
    }

    /// Total bits of a joint strategy table, `Σ_j answer_len * 2^|view_j|`,
    /// saturating on overflow.
    pub fn joint_table_bits(&self) -> u64 {
        self.views.iter().fold(0u64, |acc, v| {
            let entries = 1u64.checked_shl(v.len() as u32).unwrap_or(u64::MAX);
            acc.saturating_add(entries.saturating_mul(self.answer_len as u64))
        })
    }

    /// Exact winning probability of a pure strategy.
    pub fn strategy_value(&self, strategy: &PureStrategy) -> Result<Value> {
        Ok(fraction_of_pow2(self.strategy_wins(strategy)?, self.question_bits))
    }

    /// Number of winning questions for a pure strategy.
    pub fn strategy_wins(&self, strategy: &PureStrategy) -> Result<u64> {
        self.check_shape(strategy)?;
        let wins = (0..self.questions())
            .filter(|&x| {
                (0..self.players()).all(|j| {
                    strategy.tables[j][self.view_index(j, x) as usize] == self.target(j, x)
                })
            })
            .count();
        Ok(wins as u64)
    }

    fn check_shape(&self, strategy: &PureStrategy) -> Result<()> {
        if strategy.tables.len() != self.players() {
            return Err(Error::DimensionMismatch(format!(
                "strategy has {} players, game has {}",
                strategy.tables.len(),
                self.players()
            )));
        }
        for (j, table) in strategy.tables.iter().enumerate() {
            if table.len() != self.table_len(j) {
                return Err(Error::DimensionMismatch(format!(
                    "player {j} table has {} entries, expected {}",
                    table.len(),
                    self.table_len(j)
                )));
            }
            if table.iter().any(|&a| a & !mask(self.answer_len) != 0) {
                return Err(Error::DimensionMismatch(format!(
                    "player {j} answers wider than {} bits",
                    self.answer_len
                )));
            }
        }
        Ok(())
    }

    /// Best winning probability of player `j` alone: for each view
    /// assignment, the most frequent target among consistent questions.
    pub fn player_marginal_value(&self, player: usize) -> Result<Value> {
        if player >= self.players() {
            return Err(Error::InvalidArgument(format!(
                "player {player} out of range for {} players",
                self.players()
            )));
        }
        let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); self.table_len(player)];
        for x in 0..self.questions() {
            buckets[self.view_index(player, x) as usize].push(self.target(player, x));
        }
        let best: u64 = buckets
            .iter_mut()
            .map(|bucket| {
                bucket.sort_unstable();
                longest_run(bucket) as u64
            })
            .sum();
        Ok(fraction_of_pow2(best, self.question_bits))
    }
}

pub(crate) fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn longest_run(sorted: &[u64]) -> usize {
    let mut best = 0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        best = best.max(j);
        i += j;
    }
    best
}

/// Deterministic strategy: one answer per view assignment for each player.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PureStrategy {
    pub tables: Vec<Vec<u64>>,
}

impl PureStrategy {
    pub fn new(tables: Vec<Vec<u64>>) -> Self {
        Self { tables }
    }

    /// Everybody answers zero.
    pub fn zeros(game: &IndependentGame) -> Self {
        Self {
            tables: (0..game.players()).map(|j| vec![0; game.table_len(j)]).collect(),
        }
    }
}
