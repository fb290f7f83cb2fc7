//! Deterministic seed derivation.
//!
//! Every stage of an experiment draws its RNG from the experiment seed and a
//! string label, so adding stages or seeds never perturbs existing streams.
//! The derivation is the first 8 bytes (little-endian) of
//! `SHA-256("{seed}:{label}")`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derives a child seed from `seed` and a stage label.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let digest = Sha256::digest(format!("{seed}:{label}").as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// RNG for a labelled stage of an experiment.
pub fn stage_rng(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label))
}
