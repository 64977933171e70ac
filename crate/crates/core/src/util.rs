//! Seed derivation and stable hashing helpers.
//!
//! All randomness in the toolkit flows from explicit `u64` seeds. Child
//! seeds are derived with a splitmix64 finalizer so that ensembles and
//! per-document streams are reproducible and independent of evaluation
//! order.

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Child seed for realization `index` of a stream rooted at `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x51ed_270b)))
}

/// FNV-1a over a byte string; used for stable, non-cryptographic content
/// hashes (config hashes, per-document seed scoping).
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Hex rendering of a 64-bit hash.
pub fn hash_hex(h: u64) -> String {
    format!("{h:016x}")
}
