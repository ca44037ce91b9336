//! Splittable seeding.
//!
//! A run is driven by one 64-bit root seed. Every consumer asks for a
//! stream by `(label, index)`; the stream key is derived as
//!
//! ```text
//! h0 = splitmix64(root ^ fnv1a64(label))
//! h1 = splitmix64(h0 ^ index)
//! key[8i..8i+8] = splitmix64(h1 + i) for i in 0..4   (little-endian)
//! ```
//!
//! and the 32-byte key seeds a ChaCha20 generator. Streams with different
//! labels or indices are independent for all practical purposes, and a
//! stream's contents never depend on how many other streams were drawn.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type Rng = ChaCha20Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derive a sub-seed; useful for handing a child component its own root.
pub fn derive(root: u64, label: &str, index: u64) -> u64 {
    splitmix64(splitmix64(root ^ fnv1a64(label)) ^ index)
}

/// Independent random stream for `(label, index)` under `root`.
pub fn stream(root: u64, label: &str, index: u64) -> Rng {
    let h1 = derive(root, label, index);
    let mut key = [0u8; 32];
    for i in 0..4 {
        key[8 * i..8 * i + 8].copy_from_slice(&splitmix64(h1.wrapping_add(i as u64)).to_le_bytes());
    }
    ChaCha20Rng::from_seed(key)
}

/// Cheap per-point stream for `(key, index)`, used where every point of a
/// table gets its own fixed randomness.
pub fn point_stream(key: u64, index: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(keyed_hash(key, index))
}

/// 64-bit keyed hash, used to define pseudo-random oracles (for example
/// adversarial distinguishers) as deterministic functions of their input.
pub fn keyed_hash(key: u64, x: u64) -> u64 {
    splitmix64(splitmix64(key) ^ x.wrapping_mul(0xd6e8_feb8_6659_fd93))
}
