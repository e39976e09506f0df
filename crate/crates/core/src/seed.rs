//! Labeled seed derivation.
//!
//! A single master seed fans out into independent per-purpose streams via a
//! fixed hash of (master, label, index). Changing one consumer's label or
//! index never perturbs another's stream, and the derivation is stable
//! across platforms and releases.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 finalizer; a good 64-bit mixer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a master seed and a label.
pub fn derive(master: u64, label: &str) -> u64 {
    let mut state = mix(master);
    for chunk in label.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        state = mix(state ^ u64::from_le_bytes(word));
    }
    state = mix(state ^ label.len() as u64);
    state
}

/// Derive a child seed keyed by label and index (cells, trials, ...).
pub fn derive_indexed(master: u64, label: &str, index: u64) -> u64 {
    mix(derive(master, label) ^ mix(index))
}

/// Deterministic RNG for a derived stream.
pub fn rng(master: u64, label: &str) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive(master, label))
}

/// Deterministic RNG for an indexed derived stream.
pub fn rng_indexed(master: u64, label: &str, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive_indexed(master, label, index))
}
