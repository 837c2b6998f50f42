//! Exact game values over pure strategies.
//!
//! Joint strategy tables are ordered as one sequence of answers: players in
//! index order, each player's entries in ascending view-assignment order.
//! Both solvers return the lexicographically smallest optimal table in that
//! order, so they agree on the strategy as well as on the value.

use serde::{Deserialize, Serialize};

use super::game::{mask, IndependentGame, PureStrategy};
use crate::error::{Error, Result};
use crate::exact::{fraction_of_pow2, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverBudget {
    /// Largest joint table (in bits) the plain enumeration accepts.
    pub exhaustive_bits: u64,
    /// Largest joint table (in bits) branch-and-bound accepts.
    pub branch_bound_bits: u64,
}

impl Default for SolverBudget {
    fn default() -> Self {
        Self {
            exhaustive_bits: 24,
            branch_bound_bits: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Exhaustive,
    BranchAndBound,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueReport {
    #[serde(with = "crate::exact::value_string")]
    pub value: Value,
    pub wins: u64,
    pub questions: u64,
    pub strategy: PureStrategy,
    pub stats: SearchStats,
    pub solver: SolverKind,
}

/// Exact value by branch-and-bound.
pub fn value_exact(game: &IndependentGame, budget: &SolverBudget) -> Result<ValueReport> {
    let bits = game.joint_table_bits();
    if bits > budget.branch_bound_bits {
        return Err(Error::budget("joint strategy table bits", bits, budget.branch_bound_bits));
    }
    let mut search = BranchAndBound::new(game);
    search.descend(0);
    let wins = search.best_wins as u64;
    Ok(ValueReport {
        value: fraction_of_pow2(wins, game.question_bits()),
        wins,
        questions: game.questions(),
        strategy: search.best_strategy.expect("search always reaches a leaf"),
        stats: search.stats,
        solver: SolverKind::BranchAndBound,
    })
}

/// Exact value by enumerating every joint strategy table.
pub fn value_exhaustive(game: &IndependentGame, budget: &SolverBudget) -> Result<ValueReport> {
    let bits = game.joint_table_bits();
    if bits > budget.exhaustive_bits {
        return Err(Error::budget("joint strategy table bits", bits, budget.exhaustive_bits));
    }
    let players = game.players();
    let offsets: Vec<usize> = (0..players)
        .scan(0, |acc, j| {
            let start = *acc;
            *acc += game.table_len(j);
            Some(start)
        })
        .collect();
    let total_vars: usize = (0..players).map(|j| game.table_len(j)).sum();
    let slots: Vec<Vec<usize>> = (0..players)
        .map(|j| {
            (0..game.questions())
                .map(|x| offsets[j] + game.view_index(j, x) as usize)
                .collect()
        })
        .collect();
    let top = mask(game.answer_len());

    let mut answers = vec![0u64; total_vars];
    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut stats = SearchStats::default();
    loop {
        stats.nodes += 1;
        let wins = (0..game.questions())
            .filter(|&x| (0..players).all(|j| answers[slots[j][x as usize]] == game.target(j, x)))
            .count() as u64;
        if best.as_ref().is_none_or(|(w, _)| wins > *w) {
            best = Some((wins, answers.clone()));
        }
        // odometer: the last entry changes fastest, giving lexicographic order
        let mut pos = total_vars;
        let done = loop {
            if pos == 0 {
                break true;
            }
            pos -= 1;
            if answers[pos] < top {
                answers[pos] += 1;
                break false;
            }
            answers[pos] = 0;
        };
        if done {
            break;
        }
    }
    let (wins, flat) = best.expect("at least one table");
    let tables = (0..players)
        .map(|j| flat[offsets[j]..offsets[j] + game.table_len(j)].to_vec())
        .collect();
    Ok(ValueReport {
        value: fraction_of_pow2(wins, game.question_bits()),
        wins,
        questions: game.questions(),
        strategy: PureStrategy::new(tables),
        stats,
        solver: SolverKind::Exhaustive,
    })
}

/// Depth-first search over the table entries of every player but the last,
/// in the canonical order. The last player's table is filled in by best
/// response at each leaf.
///
/// A question is alive while no assigned entry contradicts its target. The
/// bound at a node is the minimum over players of what that player alone
/// could still win on alive questions: assigned entries contribute their
/// alive questions, unassigned ones the most frequent alive target. It never
/// underestimates any completion, so pruning when it cannot beat the
/// incumbent keeps the search exact.
struct BranchAndBound<'g> {
    game: &'g IndependentGame,
    /// per player, per view assignment: `(target, question)` sorted
    groups: Vec<Vec<Vec<(u64, u32)>>>,
    vars: Vec<(usize, usize)>,
    assigned: Vec<Vec<Option<u64>>>,
    alive: Vec<bool>,
    best_wins: i64,
    best_strategy: Option<PureStrategy>,
    stats: SearchStats,
}

impl<'g> BranchAndBound<'g> {
    fn new(game: &'g IndependentGame) -> Self {
        let players = game.players();
        let groups = (0..players)
            .map(|j| {
                let mut g: Vec<Vec<(u64, u32)>> = vec![Vec::new(); game.table_len(j)];
                for x in 0..game.questions() {
                    g[game.view_index(j, x) as usize].push((game.target(j, x), x as u32));
                }
                for bucket in &mut g {
                    bucket.sort_unstable();
                }
                g
            })
            .collect();
        let vars = (0..players - 1)
            .flat_map(|j| (0..game.table_len(j)).map(move |v| (j, v)))
            .collect();
        Self {
            game,
            groups,
            vars,
            assigned: (0..players).map(|j| vec![None; game.table_len(j)]).collect(),
            alive: vec![true; game.questions() as usize],
            best_wins: -1,
            best_strategy: None,
            stats: SearchStats::default(),
        }
    }

    /// Alive questions in a group and the most frequent alive target
    /// (smallest on ties) with its multiplicity.
    fn group_stats(&self, bucket: &[(u64, u32)]) -> (u64, u64, u64) {
        let (mut alive, mut best_target, mut best_count) = (0u64, 0u64, 0u64);
        let mut i = 0;
        while i < bucket.len() {
            let t = bucket[i].0;
            let mut count = 0;
            while i < bucket.len() && bucket[i].0 == t {
                if self.alive[bucket[i].1 as usize] {
                    count += 1;
                }
                i += 1;
            }
            alive += count;
            if count > best_count {
                best_count = count;
                best_target = t;
            }
        }
        (alive, best_target, best_count)
    }

    fn player_bound(&self, j: usize) -> u64 {
        self.groups[j]
            .iter()
            .zip(&self.assigned[j])
            .map(|(bucket, slot)| {
                let (alive, _, most) = self.group_stats(bucket);
                if slot.is_some() {
                    alive
                } else {
                    most
                }
            })
            .sum()
    }

    fn bound(&self) -> u64 {
        (0..self.game.players())
            .map(|j| self.player_bound(j))
            .min()
            .unwrap_or(0)
    }

    fn descend(&mut self, idx: usize) {
        self.stats.nodes += 1;
        let bound = self.bound();
        if bound as i64 <= self.best_wins {
            self.stats.prunes += 1;
            return;
        }
        if idx == self.vars.len() {
            self.record_leaf();
            return;
        }
        let (j, v) = self.vars[idx];
        for answer in self.candidates(j, v) {
            let killed = self.assign(j, v, answer);
            self.descend(idx + 1);
            for x in killed {
                self.alive[x as usize] = true;
            }
            self.assigned[j][v] = None;
        }
    }

    /// Distinct alive targets of the entry plus the smallest answer that is
    /// none of them; every other answer behaves exactly like that one.
    fn candidates(&self, j: usize, v: usize) -> Vec<u64> {
        let mut targets: Vec<u64> = self.groups[j][v]
            .iter()
            .filter(|(_, x)| self.alive[*x as usize])
            .map(|(t, _)| *t)
            .collect();
        targets.dedup();
        // targets are sorted and distinct, so targets[i] >= i
        let spare = targets
            .iter()
            .enumerate()
            .find(|&(i, &t)| t != i as u64)
            .map_or(targets.len() as u64, |(i, _)| i as u64);
        if spare <= mask(self.game.answer_len()) {
            targets.insert(spare as usize, spare);
        }
        targets
    }

    fn assign(&mut self, j: usize, v: usize, answer: u64) -> Vec<u32> {
        self.assigned[j][v] = Some(answer);
        let mut killed = Vec::new();
        for &(t, x) in &self.groups[j][v] {
            if t != answer && self.alive[x as usize] {
                self.alive[x as usize] = false;
                killed.push(x);
            }
        }
        killed
    }

    fn record_leaf(&mut self) {
        let last = self.game.players() - 1;
        let mut wins = 0;
        let mut response = Vec::with_capacity(self.groups[last].len());
        for bucket in &self.groups[last] {
            let (_, target, count) = self.group_stats(bucket);
            wins += count;
            response.push(if count > 0 { target } else { 0 });
        }
        if wins as i64 > self.best_wins {
            self.best_wins = wins as i64;
            let mut tables: Vec<Vec<u64>> = self.assigned[..last]
                .iter()
                .map(|t| t.iter().map(|a| a.expect("leaf has every entry assigned")).collect())
                .collect();
            tables.push(response);
            self.best_strategy = Some(PureStrategy::new(tables));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    fn swap_game() -> IndependentGame {
        IndependentGame::from_fn(2, vec![vec![1], vec![0]], 1, |j, x| (x >> j) & 1).unwrap()
    }

    #[test]
    fn swap_game_value_is_half() {
        let budget = SolverBudget::default();
        let brute = value_exhaustive(&swap_game(), &budget).unwrap();
        let bnb = value_exact(&swap_game(), &budget).unwrap();
        assert_eq!(brute.value, Value::new(1, 2));
        assert_eq!(bnb.value, brute.value);
        assert_eq!(bnb.strategy, brute.strategy);
        // a constant answer from either player caps the value at 1/4, so the
        // first optimum is both players copying
        assert_eq!(brute.strategy.tables, vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(swap_game().strategy_value(&bnb.strategy).unwrap(), bnb.value);
    }

    #[test]
    fn value_one_when_players_see_their_coordinate() {
        let g = IndependentGame::from_fn(3, vec![vec![0], vec![1], vec![2]], 1, |j, x| (x >> j) & 1).unwrap();
        let r = value_exact(&g, &SolverBudget::default()).unwrap();
        assert_eq!(r.value, Value::from_integer(1));
        assert_eq!(g.strategy_wins(&r.strategy).unwrap(), 8);
    }

    #[test]
    fn budgets_are_enforced() {
        let tight = SolverBudget {
            exhaustive_bits: 3,
            branch_bound_bits: 3,
        };
        assert!(matches!(value_exact(&swap_game(), &tight), Err(Error::BudgetExceeded { .. })));
        assert!(value_exhaustive(&swap_game(), &tight).is_err());
    }

    #[test]
    fn solvers_agree_on_random_multibit_games() {
        let mut rng = seeded(17);
        let budget = SolverBudget::default();
        for _ in 0..40 {
            let t = rng.random_range(1..=4);
            let players = rng.random_range(1..=3);
            let a = rng.random_range(1..=2);
            let views: Vec<Vec<usize>> = (0..players)
                .map(|_| (0..t).filter(|_| rng.random_bool(0.4)).take(2).collect())
                .collect();
            let targets = (0..players)
                .map(|_| (0..1u64 << t).map(|_| rng.random_range(0..1u64 << a)).collect())
                .collect();
            let g = IndependentGame::new(t, views, a, targets).unwrap();
            if g.joint_table_bits() > 16 {
                continue;
            }
            let brute = value_exhaustive(&g, &budget).unwrap();
            let bnb = value_exact(&g, &budget).unwrap();
            assert_eq!(brute.value, bnb.value, "{g:?}");
            assert_eq!(brute.strategy, bnb.strategy, "{g:?}");
        }
    }
}
