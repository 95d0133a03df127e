//! Reproducible sampling streams.
//!
//! Every sampling routine draws from a ChaCha8 stream keyed by a 64-bit seed
//! and a stream id, so independent checks never share random numbers and the
//! output does not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub const DEFAULT_SEED: u64 = 0x5EED_CAFE;

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Uniform angle in `[-π, π)`.
pub fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

/// Uniform in `[lo, hi)`; returns `lo` for an empty range.
pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}
