use crate::error::{Error, Result};

use super::key::{CarrierLabel, SecretKey};
use super::stream::{derive_stream, gaussian_draws};

/// Largest supported block bit-length.
pub const MAX_BLOCK_BITS: u32 = 24;

/// Keyed Gaussian carrier of length `2^L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Carrier {
    coords: Vec<f64>,
    block_bits: u32,
}

impl Carrier {
    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        let n = coords.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::param(format!("carrier length {n} is not 2^L with L >= 1")));
        }
        Ok(Carrier {
            block_bits: n.trailing_zeros(),
            coords,
        })
    }

    /// Draws `2^block_bits` standard normals from the stream of `(key, label)`.
    pub fn derive(key: &SecretKey, label: CarrierLabel, block_bits: u32) -> Result<Self> {
        if !(1..=MAX_BLOCK_BITS).contains(&block_bits) {
            return Err(Error::param(format!(
                "block bits {block_bits} outside [1, {MAX_BLOCK_BITS}]"
            )));
        }
        let coords = gaussian_draws(&mut derive_stream(key, label), 1usize << block_bits);
        Ok(Carrier { coords, block_bits })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn block_bits(&self) -> u32 {
        self.block_bits
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim == 0 || dim > self.len() {
            return Err(Error::param(format!(
                "truncation dim {dim} not in [1, {}]",
                self.len()
            )));
        }
        Ok(())
    }
}

/// `out[i] = carrier[(i + shift) mod 2^L]` for `i < dim`.
pub fn shift_truncate(carrier: &Carrier, shift: usize, dim: usize) -> Result<Vec<f64>> {
    carrier.check_dim(dim)?;
    let n = carrier.len();
    if shift >= n {
        return Err(Error::OutOfRange(format!("shift {shift} >= carrier length {n}")));
    }
    let c = carrier.as_slice();
    Ok((0..dim).map(|i| c[(i + shift) & (n - 1)]).collect())
}

/// Norms of every truncated shift, via prefix sums of squares over the
/// doubled carrier.
pub fn all_shift_norms(carrier: &Carrier, dim: usize) -> Result<Vec<f64>> {
    carrier.check_dim(dim)?;
    let n = carrier.len();
    let c = carrier.as_slice();
    let mut prefix = Vec::with_capacity(n + dim + 1);
    prefix.push(0.0f64);
    let mut acc = 0.0;
    for i in 0..n + dim {
        let v = c[i & (n - 1)];
        acc += v * v;
        prefix.push(acc);
    }
    Ok((0..n)
        .map(|a| (prefix[a + dim] - prefix[a]).max(0.0).sqrt())
        .collect())
}
