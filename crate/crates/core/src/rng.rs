//! Reproducible random streams.
//!
//! ChaCha is a counter-mode generator, so a `(seed, stream)` pair names an
//! independent sequence without any shared state. Work split into fixed
//! chunks, one stream per chunk, gives results that do not depend on how
//! the chunks are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for the given stream of a master seed.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A child seed derived from `(seed, index)`, e.g. one per scan grid point.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // Stream 0 of the child space is reserved for the parent's own draws.
    stream(seed ^ 0x9e37_79b9_7f4a_7c15, index.wrapping_add(1)).random()
}

/// Uniform in the open interval (0, 1); safe to take a logarithm of.
#[inline]
pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}
