//! Matched filtering of a received vector against every truncated cyclic
//! shift of a carrier.
//!
//! `corr[a] = sum_{i<D} y[i] * z[(i + a) mod n] / ||Z^a||`. The FFT path
//! computes all `n` raw correlations as the circular cross-correlation
//! `IFFT(conj(FFT(y_pad)) * FFT(z)) / n`.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::sphere::{all_shift_norms, Carrier, UnitVector};

/// Which evaluation of the correlations to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemodPath {
    /// `O(2^L D)` direct sums.
    Naive,
    /// `O(2^L log 2^L)` circular cross-correlation.
    #[default]
    Fft,
}

/// Forward/inverse plans for one carrier length.
#[derive(Clone)]
pub struct FftPlans {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftPlans {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPlans {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn forward_real(&self, v: &[f64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        for (b, &x) in buf.iter_mut().zip(v) {
            b.re = x;
        }
        self.forward.process(&mut buf);
        buf
    }

    /// Conjugated spectrum of `y` zero-padded to the carrier length; shared
    /// by every block decoded from the same received vector.
    pub fn received_spectrum(&self, y: &[f64]) -> Vec<Complex64> {
        let mut s = self.forward_real(y);
        for c in &mut s {
            *c = c.conj();
        }
        s
    }

    fn raw_correlations(&self, y_conj: &[Complex64], carrier_spec: &[Complex64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = y_conj.iter().zip(carrier_spec).map(|(a, b)| a * b).collect();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.len as f64;
        buf.into_iter().map(|c| c.re * scale).collect()
    }
}

/// Carrier with its shift norms and (optionally) its spectrum.
#[derive(Debug, Clone)]
pub struct PreparedCarrier {
    carrier: Carrier,
    dim: usize,
    norms: Vec<f64>,
    spectrum: Option<Vec<Complex64>>,
}

impl PreparedCarrier {
    pub fn new(carrier: Carrier, dim: usize, plans: Option<&FftPlans>) -> Result<Self> {
        let norms = all_shift_norms(&carrier, dim)?;
        let spectrum = match plans {
            Some(p) if p.len() == carrier.len() => Some(p.forward_real(carrier.as_slice())),
            Some(p) => {
                return Err(Error::param(format!(
                    "FFT plan length {} does not match carrier length {}",
                    p.len(),
                    carrier.len()
                )))
            }
            None => None,
        };
        Ok(PreparedCarrier {
            carrier,
            dim,
            norms,
            spectrum,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// Unit-norm truncated shift `Z^a / ||Z^a||`.
    pub fn unit_shift(&self, shift: usize) -> Vec<f64> {
        let c = self.carrier.as_slice();
        let mask = c.len() - 1;
        let inv = 1.0 / self.norms[shift];
        (0..self.dim).map(|i| c[(i + shift) & mask] * inv).collect()
    }

    fn naive_correlations(&self, y: &[f64]) -> Vec<f64> {
        let c = self.carrier.as_slice();
        let n = c.len();
        (0..n)
            .map(|a| {
                let head = (n - a).min(self.dim);
                let mut s = 0.0;
                for i in 0..head {
                    s += y[i] * c[a + i];
                }
                for i in head..self.dim {
                    s += y[i] * c[a + i - n];
                }
                s / self.norms[a]
            })
            .collect()
    }

    /// Normalized correlations for every shift. `y_conj` is the output of
    /// [`FftPlans::received_spectrum`] and is required for the FFT path.
    pub fn correlations(
        &self,
        y: &[f64],
        path: DemodPath,
        plans: Option<&FftPlans>,
        y_conj: Option<&[Complex64]>,
    ) -> Result<Vec<f64>> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: y.len(),
                right: self.dim,
            });
        }
        match path {
            DemodPath::Naive => Ok(self.naive_correlations(y)),
            DemodPath::Fft => {
                let plans = plans.ok_or_else(|| Error::param("FFT path needs plans"))?;
                let spec = self
                    .spectrum
                    .as_deref()
                    .ok_or_else(|| Error::param("carrier prepared without spectrum"))?;
                let owned;
                let y_conj = match y_conj {
                    Some(s) => s,
                    None => {
                        owned = plans.received_spectrum(y);
                        &owned
                    }
                };
                let mut raw = plans.raw_correlations(y_conj, spec);
                for (r, n) in raw.iter_mut().zip(&self.norms) {
                    *r /= n;
                }
                Ok(raw)
            }
        }
    }
}

/// Index and value of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
}

/// Normalized correlation of `y` with every truncated shift of `carrier`.
pub fn demod_correlations(y: &UnitVector, carrier: &Carrier, path: DemodPath) -> Result<Vec<f64>> {
    let plans = match path {
        DemodPath::Fft => Some(FftPlans::new(carrier.len())),
        DemodPath::Naive => None,
    };
    let prepared = PreparedCarrier::new(carrier.clone(), y.dim(), plans.as_ref())?;
    prepared.correlations(y.as_slice(), path, plans.as_ref(), None)
}
