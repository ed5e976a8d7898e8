/// Derives a sub-seed from a base seed and a purpose tag.
///
/// All randomness in the crate flows from one user-supplied seed; each
/// consumer derives its own stream with a distinct tag (for example
/// `"corpus.split"` or `"cnn.drop.3.0"`) so that adding or reordering one
/// consumer never perturbs another. The derivation is FNV-1a over the
/// little-endian seed bytes followed by the tag bytes.
pub fn derive_seed(base: u64, purpose: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for byte in base.to_le_bytes() {
        hash = (hash ^ u64::from(byte)).wrapping_mul(PRIME);
    }
    for byte in purpose.as_bytes() {
        hash = (hash ^ u64::from(*byte)).wrapping_mul(PRIME);
    }
    hash
}
