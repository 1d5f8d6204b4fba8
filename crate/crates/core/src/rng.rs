//! Counter-style RNG derivation: one ChaCha8 stream per (seed, batch).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per batch in every Monte-Carlo loop. Fixed so that the batch
/// partition, and hence every result, is independent of the worker count.
pub const MC_BATCH: usize = 1024;

pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

pub fn batch_count(samples: usize) -> usize {
    samples.div_ceil(MC_BATCH)
}

/// Sample range `[lo, hi)` covered by batch `b`.
pub fn batch_span(samples: usize, b: usize) -> (usize, usize) {
    let lo = b * MC_BATCH;
    (lo, (lo + MC_BATCH).min(samples))
}
