//! Seed derivation for trial matrices.
//!
//! `derive_seed(base, a, b, c)` folds each coordinate into the running value
//! with one SplitMix64 finalizer round:
//!
//! ```text
//! s0 = splitmix64(base)
//! s1 = splitmix64(s0 ^ a)
//! s2 = splitmix64(s1 ^ b)
//! s3 = splitmix64(s2 ^ c)
//! ```
//!
//! so any cell of a matrix can be reproduced on its own.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(base: u64, a: u64, b: u64, c: u64) -> u64 {
    let s0 = splitmix64(base);
    let s1 = splitmix64(s0 ^ a);
    let s2 = splitmix64(s1 ^ b);
    splitmix64(s2 ^ c)
}

/// Topology and traffic of one trial; shared by every protocol so they see
/// identical networks and load.
pub fn trial_seed(base: u64, cell: u64, trial: u64) -> u64 {
    derive_seed(base, 0, cell, trial)
}

/// Protocol-internal randomness (LEACH elections) for one trial.
pub fn protocol_seed(base: u64, protocol: u64, cell: u64, trial: u64) -> u64 {
    derive_seed(base, protocol + 1, cell, trial)
}

/// Independent stream for a sub-purpose of an already derived seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(stream)))
}
