//! Deterministic RNG construction and seed derivation.
//!
//! Every stochastic operation in this crate takes an explicit `u64` seed and
//! builds its own generator; there is no global RNG state. Procedures that
//! need several independent streams (bootstrap replicates, two-stage
//! samplers) derive per-stream seeds from a root seed with [`derive_seed`],
//! so results do not depend on evaluation order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Builds the crate's reproducible generator from a bare seed.
///
/// ChaCha12 gives identical streams on every platform, which the
/// byte-determinism guarantees of the CLI rely on.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Derives the seed for sub-stream `stream` of a root seed.
///
/// Implemented as a SplitMix64 step over `root ^ (stream + 1) * φ64`, the
/// usual 64-bit golden-ratio multiplier. The map is documented so that
/// externally scripted runs can reproduce any internal stream.
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut z = root ^ (stream.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<f64> = (0..32).map(|_| 0.0).collect();
        let mut r1 = rng_from_seed(42);
        let mut r2 = rng_from_seed(42);
        let s1: Vec<f64> = a.iter().map(|_| r1.gen()).collect();
        let s2: Vec<f64> = a.iter().map(|_| r2.gen()).collect();
        assert_eq!(s1, s2);
    }

    #[test]
    fn derived_streams_differ() {
        let s0 = derive_seed(7, 0);
        let s1 = derive_seed(7, 1);
        assert_ne!(s0, s1);
        assert_ne!(s0, 7);
        // stable across runs
        assert_eq!(derive_seed(7, 0), s0);
    }
}
