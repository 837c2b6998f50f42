//! Seeded randomness. Every randomized procedure in the crate draws from
//! ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with a single 64-bit value via
//! `SeedableRng::seed_from_u64`, so runs reproduce across platforms.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as Rng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}
