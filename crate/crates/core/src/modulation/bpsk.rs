//! Binary phase-shift keying over keyed orthonormal spreading carriers.

use crate::codec::BitMessage;
use crate::error::{Error, Result};
use crate::sphere::{derive_stream, dot, gaussian_draws, normalize, CarrierLabel, SecretKey, UnitVector};

/// `N` orthonormal carriers `U_0..U_{N-1}` in `R^D`.
#[derive(Debug, Clone)]
pub struct BpskCodebook {
    dim: usize,
    carriers: Vec<Vec<f64>>,
}

impl BpskCodebook {
    /// Gram–Schmidt (two passes) over the keyed draws for labels `bpsk_bit i`.
    pub fn new(key: &SecretKey, bits: usize, dim: usize) -> Result<Self> {
        if bits == 0 {
            return Err(Error::EmptyPayload);
        }
        if bits > dim {
            return Err(Error::PayloadTooLarge { bits, cap: dim });
        }
        let mut carriers: Vec<Vec<f64>> = Vec::with_capacity(bits);
        for i in 0..bits {
            let mut stream = derive_stream(key, CarrierLabel::bpsk_bit(i as u64));
            loop {
                let mut v = gaussian_draws(&mut stream, dim);
                for _ in 0..2 {
                    for u in &carriers {
                        let proj = dot(&v, u);
                        for (x, y) in v.iter_mut().zip(u) {
                            *x -= proj * y;
                        }
                    }
                }
                match normalize(&v) {
                    Ok(u) => {
                        carriers.push(u.into_inner());
                        break;
                    }
                    Err(Error::ZeroVector) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(BpskCodebook { dim, carriers })
    }

    pub fn bits(&self) -> usize {
        self.carriers.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn carrier(&self, i: usize) -> &[f64] {
        &self.carriers[i]
    }

    /// `normalize(sum_i b_i U_i)` with bit 1 -> +1 and bit 0 -> -1.
    pub fn modulate(&self, bits: &BitMessage) -> Result<UnitVector> {
        if bits.len() != self.bits() {
            return Err(Error::DimensionMismatch {
                left: bits.len(),
                right: self.bits(),
            });
        }
        let mut x = vec![0.0; self.dim];
        for (b, u) in bits.iter().zip(&self.carriers) {
            let s = if b { 1.0 } else { -1.0 };
            for (acc, v) in x.iter_mut().zip(u) {
                *acc += s * v;
            }
        }
        normalize(&x)
    }

    /// Per-bit matched filter `Y^T U_i`.
    pub fn correlations(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: y.len(),
                right: self.dim,
            });
        }
        Ok(self.carriers.iter().map(|u| dot(y, u)).collect())
    }

    /// Bit `i` is 1 iff `Y^T U_i > 0`.
    pub fn demodulate(&self, y: &[f64]) -> Result<BitMessage> {
        Ok(self.correlations(y)?.into_iter().map(|c| c > 0.0).collect())
    }
}

pub fn bpsk_modulate(key: &SecretKey, bits: &BitMessage, dim: usize) -> Result<UnitVector> {
    BpskCodebook::new(key, bits.len(), dim)?.modulate(bits)
}

pub fn bpsk_demodulate(key: &SecretKey, y: &UnitVector, payload_bits: usize) -> Result<BitMessage> {
    BpskCodebook::new(key, payload_bits, y.dim())?.demodulate(y.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carriers_are_orthonormal() {
        let book = BpskCodebook::new(&SecretKey::from_seed(1), 40, 48).unwrap();
        for i in 0..40 {
            for j in 0..40 {
                let d = dot(book.carrier(i), book.carrier(j));
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-12, "({i},{j}) {d}");
            }
        }
    }

    #[test]
    fn roundtrip_and_single_flip() {
        let key = SecretKey::from_seed(2);
        let msg: BitMessage = "10110010111100001010101011001100".parse().unwrap();
        let x = bpsk_modulate(&key, &msg, 256).unwrap();
        assert_eq!(bpsk_demodulate(&key, &x, 32).unwrap(), msg);

        let book = BpskCodebook::new(&key, 32, 256).unwrap();
        let k = 7;
        let u = book.carrier(k);
        let proj = dot(x.as_slice(), u);
        let y: Vec<f64> = x.as_slice().iter().zip(u).map(|(a, b)| a - 2.0 * proj * b).collect();
        let got = book.demodulate(&y).unwrap();
        assert_eq!(got.hamming(&msg), 1);
        assert_ne!(got.get(k), msg.get(k));
    }

    #[test]
    fn too_many_bits() {
        assert!(matches!(
            BpskCodebook::new(&SecretKey::from_seed(0), 9, 8),
            Err(Error::PayloadTooLarge { .. })
        ));
    }
}
