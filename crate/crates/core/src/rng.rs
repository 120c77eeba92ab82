//! Seeded random streams.
//!
//! Every random decision in the crate is drawn from a [`ChaCha8Rng`], whose
//! output is identical on every platform. Independent streams are derived from
//! a base seed with [`derive_seed`], a SplitMix64 finalizer applied to
//! `base ^ (stream · φ) ^ (index · φ²)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const GOLDEN_SQ: u64 = 0xD1B5_4A32_D192_ED03;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of sub-stream `(stream, index)` from `base`.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    splitmix(base ^ stream.wrapping_mul(GOLDEN) ^ index.wrapping_mul(GOLDEN_SQ))
}

/// Uniform index in `0..n`, sampled through `u64` so the result does not
/// depend on the platform's pointer width.
pub fn index<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    debug_assert!(n > 0);
    rng.random_range(0..n as u64) as usize
}

pub fn shuffle<T, R: Rng + ?Sized>(rng: &mut R, items: &mut [T]) {
    // Fisher-Yates with portable index sampling.
    for i in (1..items.len()).rev() {
        let j = index(rng, i + 1);
        items.swap(i, j);
    }
}
