//! Seeded random streams.
//!
//! Every sample index gets its own ChaCha stream derived from the run seed, so
//! results do not depend on how work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Vec5;

/// Independent generator for sample `index` of a run seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A point drawn uniformly from `[-radius, radius]⁵`.
pub fn uniform_cube<R: Rng>(rng: &mut R, radius: f64) -> Vec5 {
    let mut v = [0.0; 5];
    for x in v.iter_mut() {
        *x = rng.random_range(-radius..=radius);
    }
    v
}

/// Number of worker threads requested through `KORBIT_THREADS`, if any.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("KORBIT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}
