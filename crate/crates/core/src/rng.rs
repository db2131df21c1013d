//! Deterministic random streams.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, stream)`, so
//! trial `k` sees the same numbers regardless of how many trials ran before it
//! or in which order they were evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
