//! Reproducible random streams.
//!
//! Every trial draws from its own ChaCha8 stream (a counter-based generator
//! with the published ChaCha constants). The stream for trial `t` of a run
//! seeded with `s` is keyed by
//!
//! ```text
//! substream_seed(s, t) = splitmix64(s ^ splitmix64(t))
//! ```
//!
//! where `splitmix64` is the SplitMix64 output function (increment
//! `0x9E3779B97F4A7C15`, multipliers `0xBF58476D1CE4E5B9` and
//! `0x94D049BB133111EB`). Trials can therefore be run in any order, on any
//! number of workers, or replayed one at a time.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn substream_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed ^ splitmix64(trial))
}

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    rng_from_seed(substream_seed(seed, trial))
}
