//! Seeded random streams.
//!
//! Every random decision in the crate draws from a ChaCha8 generator
//! (`rand_chacha::ChaCha8Rng`), which produces the same sequence on every
//! platform. A master seed fans out into independent streams: the stream id
//! selects a ChaCha stream, and [`derive`] mixes structured coordinates (cell
//! index, repetition, individual index) into fresh 64-bit seeds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream ids used by the genetic search.
pub mod purpose {
    pub const INIT: u64 = 1;
    pub const TOURNAMENT: u64 = 2;
    pub const CROSSOVER: u64 = 3;
    pub const MUTATION: u64 = 4;
    pub const REPAIR: u64 = 5;
    pub const SEEDING: u64 = 6;
    pub const MIXTURE: u64 = 7;
    pub const SURVIVORS: u64 = 8;
}

/// Generator for `(seed, purpose)`.
pub fn stream(seed: u64, purpose: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose);
    rng
}

/// SplitMix64 finalizer.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministically folds `parts` into `seed`.
pub fn derive(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix(seed), |acc, &p| splitmix(acc ^ splitmix(p)))
}
