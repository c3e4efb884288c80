//! Opaque element encodings.

use std::fmt;

/// An opaque fixed-length bitstring naming an element of a hidden structure.
///
/// The length equals the owning box's declared string length. Raw byte
/// equality implies semantic equality, but not conversely: a homomorphic
/// image redefines equality, so two distinct codewords may name the same
/// element there. Semantic comparison must go through the owning box's
/// equality oracle; the `Eq`/`Hash` impls here compare raw bytes only and
/// exist for tables keyed by canonical codewords.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CryptoElement {
    bytes: Vec<u8>,
}

impl CryptoElement {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        CryptoElement { bytes }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len_bytes(&self) -> usize {
        self.bytes.len()
    }

    /// Declared length in bits (byte-aligned encodings throughout).
    pub fn bit_len(&self) -> usize {
        self.bytes.len() * 8
    }

    /// Concatenation, used by product boxes whose elements are pairs.
    pub fn concat(&self, other: &CryptoElement) -> CryptoElement {
        let mut bytes = Vec::with_capacity(self.bytes.len() + other.bytes.len());
        bytes.extend_from_slice(&self.bytes);
        bytes.extend_from_slice(&other.bytes);
        CryptoElement { bytes }
    }

    /// Splits a pair codeword at the given byte offset.
    pub fn split_at_byte(&self, mid: usize) -> (CryptoElement, CryptoElement) {
        let (a, b) = self.bytes.split_at(mid);
        (
            CryptoElement { bytes: a.to_vec() },
            CryptoElement { bytes: b.to_vec() },
        )
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CryptoElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ce:{}", self.to_hex())
    }
}

/// Encodes `value` as a little-endian codeword of exactly `len` bytes.
pub(crate) fn encode_index(value: u64, len: usize) -> CryptoElement {
    let mut bytes = vec![0u8; len];
    let src = value.to_le_bytes();
    let n = len.min(8);
    bytes[..n].copy_from_slice(&src[..n]);
    CryptoElement { bytes }
}

/// Reads back a little-endian codeword produced by [`encode_index`].
pub(crate) fn decode_index(element: &CryptoElement) -> u64 {
    let mut buf = [0u8; 8];
    let n = element.bytes.len().min(8);
    buf[..n].copy_from_slice(&element.bytes[..n]);
    u64::from_le_bytes(buf)
}

/// Smallest byte count that fits `count` distinct masked codewords: twice
/// the index width in bits, rounded up to whole bytes, at least one byte.
pub(crate) fn masked_len_bytes(count: u64) -> usize {
    let index_bits = 64 - count.saturating_sub(1).leading_zeros() as usize;
    (2 * index_bits).max(1).div_ceil(8)
}

/// Smallest byte count that fits a plain index below `count`.
pub(crate) fn index_len_bytes(count: u64) -> usize {
    let index_bits = 64 - count.saturating_sub(1).leading_zeros() as usize;
    index_bits.max(1).div_ceil(8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concat_then_split_roundtrips() {
        let a = CryptoElement::from_bytes(vec![1, 2, 3]);
        let b = CryptoElement::from_bytes(vec![9, 8]);
        let joined = a.concat(&b);
        assert_eq!(joined.len_bytes(), 5);
        let (x, y) = joined.split_at_byte(3);
        assert_eq!(x, a);
        assert_eq!(y, b);
    }

    #[test]
    fn index_codec_roundtrips() {
        for v in [0u64, 1, 255, 256, 70_000] {
            let e = encode_index(v, 4);
            assert_eq!(decode_index(&e), v);
        }
    }

    #[test]
    fn masked_lengths() {
        assert_eq!(masked_len_bytes(1), 1);
        assert_eq!(masked_len_bytes(2), 1);
        assert_eq!(masked_len_bytes(6), 1);
        assert_eq!(masked_len_bytes(81), 2);
        assert_eq!(masked_len_bytes(100_000), 5);
    }
}
