use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Length of a secret key in bytes.
pub const KEY_LEN: usize = 32;

/// Opaque 32-byte shared secret.
///
/// `Debug` never prints the key material.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretKey([u8; KEY_LEN]);

impl SecretKey {
    pub fn from_bytes(bytes: [u8; KEY_LEN]) -> Self {
        SecretKey(bytes)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let arr: [u8; KEY_LEN] = bytes.try_into().map_err(|_| {
            Error::param(format!("secret key must be {KEY_LEN} bytes, got {}", bytes.len()))
        })?;
        Ok(SecretKey(arr))
    }

    /// Deterministic key for tests and seeded benchmark runs.
    pub fn from_seed(seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"tccsk/seeded-key/v1");
        h.update(seed.to_be_bytes());
        SecretKey(h.finalize().into())
    }

    pub fn as_bytes(&self) -> &[u8; KEY_LEN] {
        &self.0
    }

    /// 64-bit fingerprint stored in vector files to detect key mismatch.
    /// Not a secret-preserving commitment; only used for diagnostics.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Sha256::new();
        h.update(b"tccsk/fingerprint/v1");
        h.update(self.0);
        let digest = h.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
    }
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SecretKey({:016x})", self.fingerprint())
    }
}

/// What a derived stream is used for. Each purpose owns a disjoint label space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    TccskBlock,
    MultikeyMsg,
    BpskBit,
    PadBits,
}

impl Purpose {
    pub fn tag(self) -> u8 {
        match self {
            Purpose::TccskBlock => 0x01,
            Purpose::MultikeyMsg => 0x02,
            Purpose::BpskBit => 0x03,
            Purpose::PadBits => 0x04,
        }
    }
}

/// `(purpose, index)` pair selecting one keyed stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CarrierLabel {
    pub purpose: Purpose,
    pub index: u64,
}

impl CarrierLabel {
    pub fn new(purpose: Purpose, index: u64) -> Self {
        CarrierLabel { purpose, index }
    }

    pub fn tccsk_block(index: u64) -> Self {
        Self::new(Purpose::TccskBlock, index)
    }

    pub fn multikey_msg(index: u64) -> Self {
        Self::new(Purpose::MultikeyMsg, index)
    }

    pub fn bpsk_bit(index: u64) -> Self {
        Self::new(Purpose::BpskBit, index)
    }

    pub fn pad_bits(index: u64) -> Self {
        Self::new(Purpose::PadBits, index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn debug_hides_key_material() {
        let key = SecretKey::from_bytes([0xab; 32]);
        let s = format!("{key:?}");
        assert!(!s.contains("abab"));
    }

    #[test]
    fn rejects_short_key() {
        assert!(SecretKey::from_slice(&[0u8; 31]).is_err());
        assert!(SecretKey::from_slice(&[0u8; 32]).is_ok());
    }

    #[test]
    fn seeded_keys_differ() {
        assert_ne!(SecretKey::from_seed(1), SecretKey::from_seed(2));
        assert_eq!(SecretKey::from_seed(7), SecretKey::from_seed(7));
    }
}
