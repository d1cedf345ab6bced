//! Truncated cyclic-shift keying.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::codec::BitMessage;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sphere::{dot, normalize, Carrier, CarrierLabel, SecretKey, UnitVector};
use crate::stats::{fisher_combine, log_rho1, rho0, LogP, Threshold};

use super::blocks::{join_blocks, split_blocks};
use super::demod::{argmax, DemodPath, FftPlans, PreparedCarrier};
use super::params::TcParams;

/// Outcome of demodulating one received vector.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub bits: BitMessage,
    pub block_values: Vec<u32>,
    pub block_cosines: Vec<f64>,
    pub per_block_log_rho1: Vec<LogP>,
    pub rho: LogP,
}

impl DecodeResult {
    pub fn blocks(&self) -> usize {
        self.block_values.len()
    }

    /// The result restricted to the first `t` blocks and `n` payload bits,
    /// with the combined confidence recomputed over those blocks only.
    pub fn prefix(&self, t: usize, n: usize, block_bits: u32) -> Result<DecodeResult> {
        if t == 0 || t > self.blocks() || n > t * block_bits as usize {
            return Err(Error::param(format!(
                "prefix of {t} blocks / {n} bits out of {} blocks",
                self.blocks()
            )));
        }
        let per_block = self.per_block_log_rho1[..t].to_vec();
        Ok(DecodeResult {
            bits: join_blocks(&self.block_values[..t], block_bits, n),
            block_values: self.block_values[..t].to_vec(),
            block_cosines: self.block_cosines[..t].to_vec(),
            rho: fisher_combine(&per_block)?,
            per_block_log_rho1: per_block,
        })
    }
}

struct BlockDecision {
    value: u32,
    cosine: f64,
    log_rho1: LogP,
}

/// Modulator/demodulator bound to one key and parameter set.
///
/// Prepared carriers (shift norms and spectra) are cached per block index,
/// so reusing a modem across many messages pays the derivation cost once.
pub struct TccskModem {
    key: SecretKey,
    params: TcParams,
    path: DemodPath,
    exec: Execution,
    plans: Option<FftPlans>,
    cache: Mutex<HashMap<u64, Arc<PreparedCarrier>>>,
}

impl TccskModem {
    pub fn new(key: SecretKey, params: TcParams) -> Self {
        Self::with_options(key, params, DemodPath::default(), Execution::default())
    }

    pub fn with_options(key: SecretKey, params: TcParams, path: DemodPath, exec: Execution) -> Self {
        let plans = match path {
            DemodPath::Fft => Some(FftPlans::new(params.carrier_len())),
            DemodPath::Naive => None,
        };
        TccskModem {
            key,
            params,
            path,
            exec,
            plans,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> TcParams {
        self.params
    }

    pub fn key(&self) -> &SecretKey {
        &self.key
    }

    fn carrier(&self, j: usize) -> Result<Arc<PreparedCarrier>> {
        let idx = j as u64;
        if let Some(c) = self.cache.lock().expect("carrier cache poisoned").get(&idx) {
            return Ok(Arc::clone(c));
        }
        let carrier = Carrier::derive(
            &self.key,
            CarrierLabel::tccsk_block(idx),
            self.params.block_bits(),
        )?;
        let prepared = Arc::new(PreparedCarrier::new(
            carrier,
            self.params.dim(),
            self.plans.as_ref(),
        )?);
        let mut cache = self.cache.lock().expect("carrier cache poisoned");
        Ok(Arc::clone(cache.entry(idx).or_insert(prepared)))
    }

    /// Derives and caches the carriers for blocks `0..t`.
    pub fn warm(&self, t: usize) -> Result<()> {
        self.exec
            .map_indexed(t, |j| self.carrier(j).map(|_| ()))
            .into_iter()
            .collect()
    }

    pub fn modulate(&self, bits: &BitMessage) -> Result<UnitVector> {
        let split = split_blocks(bits, self.params.block_bits())?;
        let shifts = self.exec.map_indexed(split.len(), |j| {
            self.carrier(j)
                .map(|c| c.unit_shift(split.blocks[j] as usize))
        });
        let mut sum = vec![0.0; self.params.dim()];
        for s in shifts {
            for (acc, x) in sum.iter_mut().zip(s?) {
                *acc += x;
            }
        }
        normalize(&sum)
    }

    fn decide(&self, j: usize, y: &[f64], y_conj: Option<&[rustfft::num_complex::Complex64]>) -> Result<BlockDecision> {
        let carrier = self.carrier(j)?;
        let corr = carrier.correlations(y, self.path, self.plans.as_ref(), y_conj)?;
        let (value, _) = argmax(&corr);
        let cosine = dot(y, &carrier.unit_shift(value)).clamp(-1.0, 1.0);
        let l0 = rho0(Threshold::new(cosine)?, self.params.dim())?;
        Ok(BlockDecision {
            value: value as u32,
            cosine,
            log_rho1: log_rho1(l0, f64::from(self.params.block_bits())),
        })
    }

    /// Decodes `t` blocks and keeps the first `n` bits.
    pub fn demodulate_blocks(&self, y: &UnitVector, t: usize, n: usize) -> Result<DecodeResult> {
        if y.dim() != self.params.dim() {
            return Err(Error::DimensionMismatch {
                left: y.dim(),
                right: self.params.dim(),
            });
        }
        let l = self.params.block_bits();
        if t == 0 || n > t * l as usize {
            return Err(Error::param(format!("cannot take {n} bits from {t} blocks of {l}")));
        }
        let y = y.as_slice();
        let y_conj = self.plans.as_ref().map(|p| p.received_spectrum(y));
        let decisions: Vec<BlockDecision> = self
            .exec
            .map_indexed(t, |j| self.decide(j, y, y_conj.as_deref()))
            .into_iter()
            .collect::<Result<_>>()?;
        let block_values: Vec<u32> = decisions.iter().map(|d| d.value).collect();
        let per_block_log_rho1: Vec<LogP> = decisions.iter().map(|d| d.log_rho1).collect();
        Ok(DecodeResult {
            bits: join_blocks(&block_values, l, n),
            block_cosines: decisions.iter().map(|d| d.cosine).collect(),
            rho: fisher_combine(&per_block_log_rho1)?,
            block_values,
            per_block_log_rho1,
        })
    }

    /// Decodes an `n`-bit payload.
    pub fn demodulate(&self, y: &UnitVector, n: usize) -> Result<DecodeResult> {
        if n == 0 {
            return Err(Error::EmptyPayload);
        }
        self.demodulate_blocks(y, self.params.blocks_for(n), n)
    }
}

pub fn tccsk_modulate(key: &SecretKey, bits: &BitMessage, params: TcParams) -> Result<UnitVector> {
    TccskModem::new(key.clone(), params).modulate(bits)
}

pub fn tccsk_demodulate(
    key: &SecretKey,
    y: &UnitVector,
    params: TcParams,
    payload_bits: usize,
) -> Result<DecodeResult> {
    TccskModem::new(key.clone(), params).demodulate(y, payload_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{cosine, random_unit_vector};

    fn bits_from_u64(v: u64, n: usize) -> BitMessage {
        let mut m = BitMessage::new();
        m.push_be(v, n as u32);
        m
    }

    #[test]
    fn single_block_is_the_normalized_shift() {
        let key = SecretKey::from_seed(1);
        let p = TcParams::new(32, 8).unwrap();
        let modem = TccskModem::new(key.clone(), p);
        let x = modem.modulate(&bits_from_u64(0xa7, 8)).unwrap();
        let c = Carrier::derive(&key, CarrierLabel::tccsk_block(0), 8).unwrap();
        let expect = crate::sphere::shift_truncate(&c, 0xa7, 32).unwrap();
        let expect = normalize(&expect).unwrap();
        for (a, b) in x.as_slice().iter().zip(expect.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn noiseless_roundtrip_small() {
        let p = TcParams::new(256, 10).unwrap();
        for seed in 0..20u64 {
            let key = SecretKey::from_seed(seed);
            let n = 1 + (seed as usize * 7) % 40;
            let msg = bits_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> (64 - n), n);
            let x = tccsk_modulate(&key, &msg, p).unwrap();
            assert!((crate::sphere::l2_norm(x.as_slice()) - 1.0).abs() < 1e-9);
            let r = tccsk_demodulate(&key, &x, p, n).unwrap();
            assert_eq!(r.bits, msg);
            assert_eq!(r.blocks(), n.div_ceil(10));
        }
    }

    #[test]
    fn sign_flip_gives_no_confidence() {
        let p = TcParams::new(256, 12).unwrap();
        let msg = bits_from_u64(0x1234_5678, 36);
        for seed in 0..10 {
            let key = SecretKey::from_seed(seed);
            let modem = TccskModem::new(key, p);
            let y = modem.modulate(&msg).unwrap().neg();
            for (j, &v) in [0x012u32, 0x345, 0x678].iter().enumerate() {
                let c = dot(y.as_slice(), &modem.carrier(j).unwrap().unit_shift(v as usize));
                assert!(c < -0.4, "{c}");
            }
            let r = modem.demodulate(&y, 36).unwrap();
            assert_ne!(r.bits, msg);
            assert!(r.rho.p() > 1e-3, "rho = {}", r.rho);
        }
    }

    #[test]
    fn paths_and_execution_modes_agree() {
        let key = SecretKey::from_seed(3);
        let p = TcParams::new(100, 9).unwrap();
        let y = random_unit_vector(&key, CarrierLabel::multikey_msg(5), 100).unwrap();
        let mut results = Vec::new();
        for path in [DemodPath::Naive, DemodPath::Fft] {
            for exec in [Execution::Sequential, Execution::Parallel] {
                let m = TccskModem::with_options(key.clone(), p, path, exec);
                results.push(m.demodulate(&y, 27).unwrap());
            }
        }
        for r in &results[1..] {
            assert_eq!(r.block_values, results[0].block_values);
            assert_eq!(r.block_cosines, results[0].block_cosines);
        }
    }

    #[test]
    fn prefix_recombines() {
        let key = SecretKey::from_seed(4);
        let p = TcParams::new(64, 8).unwrap();
        let msg = bits_from_u64(0xdead_beef, 32);
        let modem = TccskModem::new(key, p);
        let x = modem.modulate(&msg).unwrap();
        let full = modem.demodulate(&x, 32).unwrap();
        let pre = full.prefix(2, 16, 8).unwrap();
        assert_eq!(pre.bits, msg.truncated(16));
        assert_eq!(pre.rho.ln(), fisher_combine(&full.per_block_log_rho1[..2]).unwrap().ln());
    }

    #[test]
    fn shared_block_geometry() {
        let key = SecretKey::from_seed(11);
        let p = TcParams::new(256, 12).unwrap();
        let modem = TccskModem::new(key, p);
        let a = modem.modulate(&bits_from_u64(0x111_222_333, 36)).unwrap();
        let b = modem.modulate(&bits_from_u64(0x111_222_334, 36)).unwrap();
        let c = cosine(&a, &b).unwrap();
        assert!((c - 2.0 / 3.0).abs() < 0.1, "{c}");
    }
}
