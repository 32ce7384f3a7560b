//! Seed derivation and the RNG used for every random draw in the crate.
//!
//! Child seeds are the first eight bytes (little endian) of
//! `SHA-256(master_le || trial_le || purpose_utf8)`. Streams are ChaCha20
//! seeded through `SeedableRng::seed_from_u64`, which is specified by
//! `rand_core` and does not depend on the platform.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha20Rng;

pub fn derive_seed(master_seed: u64, trial_index: u64, purpose: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update(trial_index.to_le_bytes());
    hasher.update(purpose.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Shorthand for `rng_from_seed(derive_seed(..))`.
pub fn stream(master_seed: u64, trial_index: u64, purpose: &str) -> Rng {
    rng_from_seed(derive_seed(master_seed, trial_index, purpose))
}
