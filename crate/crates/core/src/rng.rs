//! Seeded random streams.
//!
//! Every random draw in the crate goes through a ChaCha stream keyed by a
//! master seed and selected by a stream index, so that trial `i` of a run sees
//! the same numbers no matter which thread executes it or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Generator for stream `index` within the sub-family `family` (e.g. one
/// verification suite). Families never share a stream.
pub fn family_stream(seed: u64, family: u32, index: u32) -> StreamRng {
    stream(seed, (u64::from(family) << 32) | u64::from(index))
}
