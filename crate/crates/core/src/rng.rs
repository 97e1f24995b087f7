//! Seeded, splittable random streams.
//!
//! All stochastic kernels take an explicit seed and run on ChaCha8, which is
//! platform-stable. Derived streams (per sweep point, per replica) come from
//! [`derive_seed`], a splitmix64 mix of the master seed and stream tags, so
//! adding replicas never reshuffles the seeds of existing ones.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by every kernel in this workspace.
pub type RunRng = ChaCha8Rng;

/// Build the run generator for a given 64-bit seed.
pub fn rng_from_seed(seed: u64) -> RunRng {
    RunRng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable hash of (master seed, stream tags) -> derived stream seed.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut acc = splitmix64(master);
    for &t in tags {
        acc = splitmix64(acc ^ splitmix64(t.wrapping_add(0xa076_1d64_78bd_642f)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<f64> = rng_from_seed(42).sample_iter(rand::distributions::Standard).take(8).collect();
        let b: Vec<f64> = rng_from_seed(42).sample_iter(rand::distributions::Standard).take(8).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn derived_seeds_are_tag_stable() {
        // replica k's seed must not depend on how many replicas exist
        let s1 = derive_seed(7, &[3, 2]);
        let s2 = derive_seed(7, &[3, 2]);
        assert_eq!(s1, s2);
        assert_ne!(derive_seed(7, &[3, 2]), derive_seed(7, &[2, 3]));
        assert_ne!(derive_seed(7, &[0]), derive_seed(8, &[0]));
    }
}
