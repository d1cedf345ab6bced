use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sphere::{normalize, UnitVector};

use super::spec::{ChannelSpec, NoiseLevel, Stage};

const CHANNEL_DOMAIN: &[u8] = b"tccsk/channel/v1";
const TRIAL_DOMAIN: &[u8] = b"tccsk/trial/v1";

fn hash_seed(domain: &[u8], a: u64, b: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(domain);
    h.update(a.to_be_bytes());
    h.update(b.to_be_bytes());
    u64::from_le_bytes(h.finalize()[..8].try_into().expect("8 bytes"))
}

/// Seed for trial `trial` of a run with master seed `master`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    hash_seed(TRIAL_DOMAIN, master, trial)
}

fn stage_rng(seed: u64, stage: usize) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(hash_seed(CHANNEL_DOMAIN, seed, stage as u64))
}

/// `sigma` for a unit-norm signal: `snr_db = 10 log10(1 / (D sigma^2))`.
pub fn snr_db_to_sigma(snr_db: f64, dim: usize) -> f64 {
    (10f64.powf(-snr_db / 10.0) / dim as f64).sqrt()
}

pub fn sigma_to_snr_db(sigma: f64, dim: usize) -> f64 {
    -10.0 * (dim as f64 * sigma * sigma).log10()
}

/// SNR of a signal scaled by `gain` before noise of deviation `sigma`.
pub fn effective_snr_db(gain: f64, sigma: f64, dim: usize) -> f64 {
    sigma_to_snr_db(sigma, dim) + 20.0 * gain.log10()
}

fn awgn_with(x: &[f64], sigma: f64, rng: &mut ChaCha20Rng) -> Vec<f64> {
    x.iter()
        .map(|v| {
            let n: f64 = StandardNormal.sample(rng);
            v + sigma * n
        })
        .collect()
}

fn erase_with(x: &[f64], fraction: f64, rng: &mut ChaCha20Rng) -> Vec<f64> {
    let mut out = x.to_vec();
    let k = (fraction * x.len() as f64).floor() as usize;
    for i in sample(rng, x.len(), k) {
        out[i] = 0.0;
    }
    out
}

pub fn awgn(x: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    Stage::Awgn(NoiseLevel::Sigma(sigma)).validate()?;
    Ok(awgn_with(x, sigma, &mut stage_rng(seed, 0)))
}

/// Zeroes `floor(fraction * D)` distinct coordinates chosen uniformly.
pub fn erase_coords(x: &[f64], fraction: f64, seed: u64) -> Result<Vec<f64>> {
    Stage::Erase(fraction).validate()?;
    Ok(erase_with(x, fraction, &mut stage_rng(seed, 0)))
}

pub fn gain(x: &[f64], g: f64) -> Result<Vec<f64>> {
    Stage::Gain(g).validate()?;
    Ok(x.iter().map(|v| v * g).collect())
}

/// Runs every stage in order without the final renormalization.
pub fn apply_chain_raw(x: &[f64], spec: &ChannelSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let dim = x.len();
    let mut y = x.to_vec();
    for (i, stage) in spec.stages.iter().enumerate() {
        y = match *stage {
            Stage::Awgn(level) => {
                let sigma = match level {
                    NoiseLevel::Sigma(s) => s,
                    NoiseLevel::SnrDb(db) => snr_db_to_sigma(db, dim),
                };
                awgn_with(&y, sigma, &mut stage_rng(spec.seed, i))
            }
            Stage::Erase(f) => erase_with(&y, f, &mut stage_rng(spec.seed, i)),
            Stage::Gain(g) => gain(&y, g)?,
        };
    }
    Ok(y)
}

/// Applies the chain and renormalizes; with renormalization disabled the
/// output must already have unit norm.
pub fn apply_chain(x: &UnitVector, spec: &ChannelSpec) -> Result<UnitVector> {
    let y = apply_chain_raw(x.as_slice(), spec)?;
    if spec.renormalize {
        normalize(&y)
    } else {
        UnitVector::new(y).map_err(|e| match e {
            Error::InvalidParameter(m) => Error::param(format!("raw channel output: {m}")),
            e => e,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_conversions() {
        assert!((snr_db_to_sigma(0.0, 256) - 1.0 / 16.0).abs() < 1e-15);
        assert!((sigma_to_snr_db(1.0 / 16.0, 256)).abs() < 1e-12);
        let drop = sigma_to_snr_db(0.1, 64) - effective_snr_db(0.5, 0.1, 64);
        assert!((drop - 20.0 * 2f64.log10()).abs() < 1e-12);
        assert!((drop - 6.0206).abs() < 1e-4);
    }

    #[test]
    fn erase_count_is_floor() {
        let x = vec![1.0; 256];
        let y = erase_coords(&x, 0.4, 3).unwrap();
        assert_eq!(y.iter().filter(|v| **v == 0.0).count(), 102);
        assert_eq!(erase_coords(&x, 0.0, 3).unwrap(), x);
    }

    #[test]
    fn gain_rejects_nonpositive() {
        assert!(gain(&[1.0], 0.0).is_err());
        assert_eq!(gain(&[1.0, 2.0], 1.0).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
        assert_eq!(trial_seed(7, 9), trial_seed(7, 9));
    }
}
