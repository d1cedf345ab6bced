use crate::error::{Error, Result};
use crate::sphere::MAX_BLOCK_BITS;

/// Default embedding dimension.
pub const DEFAULT_DIM: usize = 256;
/// Default bits per block.
pub const DEFAULT_BLOCK_BITS: u32 = 16;

/// Cyclic shift convention baked into the format: `out[i] = Z[(i + a) mod 2^L]`.
pub const SHIFT_CONVENTION: &str = "left";

/// Embedding dimension `D` and block length `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TcParams {
    dim: usize,
    block_bits: u32,
}

impl TcParams {
    pub fn new(dim: usize, block_bits: u32) -> Result<Self> {
        if !(1..=MAX_BLOCK_BITS).contains(&block_bits) {
            return Err(Error::param(format!(
                "block bits L = {block_bits} outside [1, {MAX_BLOCK_BITS}]"
            )));
        }
        if dim < 2 || dim > 1usize << block_bits {
            return Err(Error::param(format!(
                "dimension D = {dim} outside [2, 2^{block_bits}]"
            )));
        }
        Ok(TcParams { dim, block_bits })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_bits(&self) -> u32 {
        self.block_bits
    }

    /// Carrier length `2^L`.
    pub fn carrier_len(&self) -> usize {
        1 << self.block_bits
    }

    /// `T = ceil(N / L)`.
    pub fn blocks_for(&self, payload_bits: usize) -> usize {
        payload_bits.div_ceil(self.block_bits as usize)
    }
}

impl Default for TcParams {
    fn default() -> Self {
        TcParams {
            dim: DEFAULT_DIM,
            block_bits: DEFAULT_BLOCK_BITS,
        }
    }
}
