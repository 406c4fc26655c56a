//! Seed derivation for independent, reproducible random streams.
//!
//! Every consumer of randomness (a particle at a given step, the resampler,
//! the measurement simulator, an MC run) gets its own ChaCha stream whose
//! seed is a hash of `(root seed, purpose, step, index)`. Stream assignment
//! depends only on those integers, never on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream purposes; kept distinct so streams never collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Particle = 1,
    Resample = 2,
    PhdPredict = 3,
    PhdBirth = 4,
    Measurement = 5,
    Truth = 6,
    Run = 7,
    Test = 8,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a 64-bit seed from a root seed and a tuple of integers.
pub fn derive_seed(root: u64, purpose: Purpose, step: u64, index: u64) -> u64 {
    let mut h = splitmix64(root);
    h = splitmix64(h ^ (purpose as u64));
    h = splitmix64(h ^ step);
    splitmix64(h ^ index)
}

pub fn stream(root: u64, purpose: Purpose, step: u64, index: u64) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(root, purpose, step, index))
}

/// The stream owned by particle `index` at time `step`.
pub fn particle_stream(root: u64, step: u32, index: usize) -> StreamRng {
    stream(root, Purpose::Particle, step as u64, index as u64)
}

pub fn resample_stream(root: u64, step: u32) -> StreamRng {
    stream(root, Purpose::Resample, step as u64, 0)
}
