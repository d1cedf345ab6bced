//! Brute-force multi-key baseline: one keyed direction per message.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sphere::{dot, random_unit_vector, CarrierLabel, SecretKey, UnitVector};
use crate::stats::{log_rho1, rho0, trust_ceiling_bits, LogP, Threshold};

/// Largest payload the brute-force decoder will enumerate.
pub const MAX_MULTIKEY_BITS: u32 = 20;

#[derive(Debug, Clone, Copy)]
pub struct MultikeyDecision {
    pub message: u64,
    pub cosine: f64,
    pub log_rho1: LogP,
}

fn check_bits(bits: u32) -> Result<()> {
    if bits > MAX_MULTIKEY_BITS {
        return Err(Error::Intractable(bits));
    }
    Ok(())
}

/// `X_m`, the keyed direction for message `m` of an `bits`-bit payload.
pub fn multikey_modulate(key: &SecretKey, message: u64, bits: u32, dim: usize) -> Result<UnitVector> {
    check_bits(bits)?;
    if message >> bits != 0 {
        return Err(Error::OutOfRange(format!("message {message} needs more than {bits} bits")));
    }
    random_unit_vector(key, CarrierLabel::multikey_msg(message), dim)
}

/// All `2^bits` keyed directions, for decoding many vectors under one key.
#[derive(Debug, Clone)]
pub struct MultikeyCodebook {
    bits: u32,
    dim: usize,
    directions: Vec<UnitVector>,
}

impl MultikeyCodebook {
    pub fn new(key: &SecretKey, bits: u32, dim: usize, exec: Execution) -> Result<Self> {
        check_bits(bits)?;
        let directions = exec
            .map_indexed(1usize << bits, |m| {
                random_unit_vector(key, CarrierLabel::multikey_msg(m as u64), dim)
            })
            .into_iter()
            .collect::<Result<_>>()?;
        Ok(MultikeyCodebook {
            bits,
            dim,
            directions,
        })
    }

    pub fn direction(&self, message: u64) -> &UnitVector {
        &self.directions[message as usize]
    }

    /// Best-matching message and its p-value corrected for `2^bits` tests.
    pub fn decode(&self, y: &UnitVector) -> Result<MultikeyDecision> {
        if y.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: y.dim(),
                right: self.dim,
            });
        }
        let cos: Vec<f64> = self.directions.iter().map(|x| dot(y.as_slice(), x.as_slice())).collect();
        let (m, c) = super::demod::argmax(&cos);
        let c = c.clamp(-1.0, 1.0);
        Ok(MultikeyDecision {
            message: m as u64,
            cosine: c,
            log_rho1: log_rho1(rho0(Threshold::new(c)?, self.dim)?, f64::from(self.bits)),
        })
    }
}

/// Tests all `2^bits` directions and reports the best with its corrected
/// p-value.
pub fn multikey_decode(
    key: &SecretKey,
    y: &UnitVector,
    bits: u32,
    exec: Execution,
) -> Result<MultikeyDecision> {
    MultikeyCodebook::new(key, bits, y.dim(), exec)?.decode(y)
}

/// Payload length in bits beyond which a `2^N`-way decode at per-test
/// p-value `rho0` can no longer be trusted.
pub fn max_trusted_bits(log_rho0: LogP) -> f64 {
    trust_ceiling_bits(log_rho0)
}
