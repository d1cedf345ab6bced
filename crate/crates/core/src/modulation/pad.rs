//! Fixed-length comparator: an `n`-bit message followed by `64 - n` keyed
//! pad bits, accepted only if the pad matches exactly.

use crate::codec::BitMessage;
use crate::error::{Error, Result};
use crate::sphere::{derive_stream, CarrierLabel, SecretKey};
use crate::stats::LogP;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct PadCheck {
    pub accepted: bool,
    pub message: BitMessage,
    /// Chance that a random word passes: `2^-(64 - n)`.
    pub log_p: LogP,
}

fn pad_value(key: &SecretKey, n: usize) -> u64 {
    let mut bytes = [0u8; 8];
    derive_stream(key, CarrierLabel::pad_bits(0)).fill_bytes(&mut bytes);
    // the first 64 - n stream bits, right-aligned
    u64::from_be_bytes(bytes) >> n
}

fn mask(width: usize) -> u64 {
    if width >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn check_len(n: usize) -> Result<()> {
    if n >= WORD_BITS {
        return Err(Error::OutOfRange(format!("pad message length {n} must be below 64")));
    }
    Ok(())
}

/// Message bits in the high `n` positions, pad in the low `64 - n`.
pub fn keyed_pad_embed(bits: &BitMessage, key: &SecretKey) -> Result<u64> {
    let n = bits.len();
    check_len(n)?;
    let msg = if n == 0 { 0 } else { bits.read_be(0, n as u32) << (WORD_BITS - n) };
    Ok(msg | pad_value(key, n))
}

pub fn keyed_pad_check(word: u64, key: &SecretKey, n: usize) -> Result<PadCheck> {
    check_len(n)?;
    let width = WORD_BITS - n;
    let mut message = BitMessage::new();
    if n > 0 {
        message.push_be(word >> width, n as u32);
    }
    Ok(PadCheck {
        accepted: word & mask(width) == pad_value(key, n),
        message,
        log_p: LogP::new(-(width as f64) * std::f64::consts::LN_2)?,
    })
}
