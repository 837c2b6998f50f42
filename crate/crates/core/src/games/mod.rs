//! Independent games, their exact values, repetition and the matrix games.

pub mod builders;
pub mod description;
pub mod game;
pub mod repetition;
pub mod solver;

pub use builders::{add_observer_player, build_gs, build_product_game, build_transpose_game, repeat};
pub use description::GameDescription;
pub use game::{IndependentGame, PureStrategy, MAX_QUESTION_BITS};
pub use repetition::{repeated_value_bounds, repetition_decay_experiment, DecayRow};
pub use solver::{value_exact, value_exhaustive, SearchStats, SolverBudget, SolverKind, ValueReport};
