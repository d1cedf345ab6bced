use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Variable-length bit string. The length is explicit; packed byte forms
/// are zero-padded MSB-first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitMessage {
    bits: Vec<bool>,
}

impl BitMessage {
    pub fn new() -> Self {
        BitMessage::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitMessage { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// First `n` bits (all of them if `n >= len`).
    pub fn truncated(&self, n: usize) -> BitMessage {
        BitMessage {
            bits: self.bits[..n.min(self.len())].to_vec(),
        }
    }

    /// Number of positions where `self` and `other` differ over the shorter
    /// length, plus the length difference.
    pub fn hamming(&self, other: &BitMessage) -> usize {
        let common = self.len().min(other.len());
        let diff = self.bits[..common]
            .iter()
            .zip(&other.bits[..common])
            .filter(|(a, b)| a != b)
            .count();
        diff + self.len().max(other.len()) - common
    }

    pub fn to_packed_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    pub fn from_packed_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if len > bytes.len() * 8 {
            return Err(Error::format(
                "bit message",
                format!("{len} bits do not fit in {} bytes", bytes.len()),
            ));
        }
        Ok(BitMessage {
            bits: (0..len).map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0).collect(),
        })
    }

    /// Bits `[start, start + width)` as a big-endian integer; positions past
    /// the end read as zero.
    pub fn read_be(&self, start: usize, width: u32) -> u64 {
        (0..width as usize).fold(0u64, |acc, i| {
            (acc << 1) | u64::from(self.get(start + i).unwrap_or(false))
        })
    }

    pub fn push_be(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
    }
}

impl FromIterator<bool> for BitMessage {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitMessage {
            bits: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for BitMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitMessage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::format("bit string", format!("unexpected {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitMessage::from_bits)
    }
}
