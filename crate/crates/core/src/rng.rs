//! Seeded randomness.
//!
//! Every random draw in the crate comes from SplitMix64 (state advance
//! `s += 0x9E3779B97F4A7C15`, then the standard xor-shift-multiply finalizer)
//! seeded from a single `u64`. Independent streams, such as one per trial,
//! are derived with [`stream`], so results do not depend on scheduling.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::SplitMix64;

pub type Rng = SplitMix64;

pub fn from_seed(seed: u64) -> Rng {
    SplitMix64::seed_from_u64(seed)
}

/// Generator for sub-stream `index` of `seed`.
pub fn stream(seed: u64, index: u64) -> Rng {
    let mixed = seed ^ index.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03);
    SplitMix64::seed_from_u64(mixed)
}

pub fn gaussian_vector(rng: &mut Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| StandardNormal.sample(rng))
}
