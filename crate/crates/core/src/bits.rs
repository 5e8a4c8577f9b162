//! Bit sequences shared by the coders and the channel.

use std::fmt;

use bitvec::prelude::*;

/// An ordered sequence of bits, MSB-first when packed into bytes.
///
/// Byte serialization pads the last byte with zeros; the exact length travels
/// separately in every container header.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitStream {
    bits: BitVec<u8, Msb0>,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bits: BitVec::with_capacity(bits),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: BitVec::repeat(false, len),
        }
    }

    /// Parses a `0`/`1` string. Any other character yields `None`.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let mut out = Self::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => return None,
            }
        }
        Some(out)
    }

    /// First `bit_len` bits of `bytes`, MSB-first.
    pub fn from_bytes(bytes: &[u8], bit_len: usize) -> Option<Self> {
        if bit_len > bytes.len() * 8 {
            return None;
        }
        let mut bits = BitVec::<u8, Msb0>::from_slice(bytes);
        bits.truncate(bit_len);
        Some(Self { bits })
    }

    /// Packs into bytes, zero-padding the final byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bits = self.bits.clone();
        bits.set_uninitialized(false);
        bits.into_vec()
    }

    pub fn byte_len(&self) -> usize {
        self.bits.len().div_ceil(8)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitStream) {
        self.bits.extend_from_bitslice(&other.bits);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            self.push((value >> i) & 1 == 1);
        }
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).map(|b| *b)
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        self.bits.set(index, value);
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        let v = self.bits[index];
        self.bits.set(index, !v);
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().by_vals()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn slice(&self, start: usize, end: usize) -> BitStream {
        Self {
            bits: self.bits[start..end].to_bitvec(),
        }
    }

    /// `self XOR other` over equal-length streams.
    pub fn xor(&self, other: &BitStream) -> Option<BitStream> {
        if self.len() != other.len() {
            return None;
        }
        let mut bits = self.bits.clone();
        bits ^= &other.bits;
        Some(Self { bits })
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitStream({})", self.to_bit_string())
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}
