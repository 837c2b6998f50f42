//! Block rigidity over F2: matrices, functions, independent games and a
//! multitape Turing machine simulator for block-respecting computations.

pub mod error;
pub mod exact;
pub mod f2;
pub mod games;
pub mod rigidity;
pub mod rng;
pub mod tmsim;

pub use error::{Error, Result};
pub use exact::Value;
pub use f2::{BitMatrix, BitVector, BlockLayout, Order};
