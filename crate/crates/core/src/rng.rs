//! Counter-based random streams.
//!
//! Every random object in the crate is drawn from a ChaCha8 stream selected by
//! `(seed, stream index)`, so the value of draw `d` never depends on how work is
//! split between threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20240917;

/// Generator for draw `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a base seed and a textual label.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    label
        .bytes()
        .fold(splitmix64(seed), |acc, b| splitmix64(acc ^ u64::from(b)))
}
