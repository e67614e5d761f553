//! Deterministic sub-seed derivation.
//!
//! Every stochastic step in the pipeline draws from a ChaCha stream seeded
//! through here, so a single 64-bit master seed reproduces a whole run
//! bit-for-bit regardless of which subsystems happen to consume randomness.

/// Derives an independent sub-seed from a master seed and a textual label.
///
/// Uses FNV-1a over the label mixed through SplitMix64; both are fixed
/// algorithms, so derived seeds are stable across platforms and releases.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    splitmix64(master ^ fnv1a(label.as_bytes()))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    hash
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
