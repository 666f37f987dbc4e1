//! Stable seed derivation. The hash is FNV-1a over an explicit byte
//! encoding, so derived seeds never change across platforms or releases.

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

/// FNV-1a 64-bit hash.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Seed for one experiment trial, derived from the master seed, the graph
/// size, a stream tag (method name or "signal"), and the trial index.
pub fn trial_seed(master: u64, size: usize, tag: &str, trial: usize) -> u64 {
    let mut bytes = Vec::with_capacity(24 + tag.len());
    bytes.extend_from_slice(&master.to_le_bytes());
    bytes.extend_from_slice(&(size as u64).to_le_bytes());
    bytes.extend_from_slice(tag.as_bytes());
    bytes.push(0);
    bytes.extend_from_slice(&(trial as u64).to_le_bytes());
    fnv1a(&bytes)
}
