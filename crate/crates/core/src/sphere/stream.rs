//! Keyed pseudorandom streams and the Gaussian sampler built on them.
//!
//! Block `c` of the stream for `(key, label)` is
//! `HMAC-SHA256(key, purpose_tag || index_be64 || c_be64)`, for `c = 0, 1, ...`.
//! Words are read as little-endian `u64`s from consecutive 8-byte chunks.

use std::f64::consts::PI;

use hmac::{Hmac, Mac};
use sha2::Sha256;

use super::key::{CarrierLabel, SecretKey};

/// Identifier of the stream construction, written into every derived-data file.
pub const PRF_ID: &str = "HMAC-SHA256-CTR/1";

const BLOCK_LEN: usize = 32;

type HmacSha256 = Hmac<Sha256>;

/// Infinite deterministic byte stream for one `(key, label)` pair.
#[derive(Clone)]
pub struct KeyStream {
    mac: HmacSha256,
    prefix: [u8; 9],
    counter: u64,
    block: [u8; BLOCK_LEN],
    pos: usize,
}

/// Opens the stream for `(key, label)`.
pub fn derive_stream(key: &SecretKey, label: CarrierLabel) -> KeyStream {
    let mac = HmacSha256::new_from_slice(key.as_bytes()).expect("HMAC accepts any key length");
    let mut prefix = [0u8; 9];
    prefix[0] = label.purpose.tag();
    prefix[1..].copy_from_slice(&label.index.to_be_bytes());
    KeyStream {
        mac,
        prefix,
        counter: 0,
        block: [0u8; BLOCK_LEN],
        pos: BLOCK_LEN,
    }
}

impl KeyStream {
    fn refill(&mut self) {
        let mut mac = self.mac.clone();
        mac.update(&self.prefix);
        mac.update(&self.counter.to_be_bytes());
        self.block.copy_from_slice(&mac.finalize().into_bytes());
        self.counter += 1;
        self.pos = 0;
    }

    pub fn fill_bytes(&mut self, out: &mut [u8]) {
        let mut written = 0;
        while written < out.len() {
            if self.pos == BLOCK_LEN {
                self.refill();
            }
            let n = (BLOCK_LEN - self.pos).min(out.len() - written);
            out[written..written + n].copy_from_slice(&self.block[self.pos..self.pos + n]);
            self.pos += n;
            written += n;
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut buf = [0u8; 8];
        self.fill_bytes(&mut buf);
        u64::from_le_bytes(buf)
    }

    /// Uniform on `(0, 1)`: 53 high bits of a word, zero rejected.
    pub fn next_uniform(&mut self) -> f64 {
        loop {
            let u = (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Next pair of standard normal deviates (Box–Muller).
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * libm::log(u1)).sqrt();
        let theta = 2.0 * PI * u2;
        (r * libm::cos(theta), r * libm::sin(theta))
    }
}

impl Iterator for KeyStream {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.pos == BLOCK_LEN {
            self.refill();
        }
        let b = self.block[self.pos];
        self.pos += 1;
        Some(b)
    }
}

/// `count` standard normal draws from `stream`. For odd counts the last
/// sine branch is discarded.
pub fn gaussian_draws(stream: &mut KeyStream, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count + 1);
    while out.len() < count {
        let (a, b) = stream.next_gaussian_pair();
        out.push(a);
        out.push(b);
    }
    out.truncate(count);
    out
}
