use crate::codec::BitMessage;
use crate::error::{Error, Result};

/// A payload cut into `L`-bit big-endian block values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSplit {
    pub blocks: Vec<u32>,
    pub pad_bits: usize,
}

impl BlockSplit {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Splits `bits` into `ceil(N / L)` blocks, zero-padding the last one.
pub fn split_blocks(bits: &BitMessage, block_bits: u32) -> Result<BlockSplit> {
    if bits.is_empty() {
        return Err(Error::EmptyPayload);
    }
    if block_bits == 0 || block_bits > 32 {
        return Err(Error::param(format!("block bits {block_bits} outside [1, 32]")));
    }
    let l = block_bits as usize;
    let t = bits.len().div_ceil(l);
    Ok(BlockSplit {
        blocks: (0..t).map(|j| bits.read_be(j * l, block_bits) as u32).collect(),
        pad_bits: t * l - bits.len(),
    })
}

/// Inverse of [`split_blocks`]: concatenates blocks and keeps the first
/// `payload_bits`.
pub fn join_blocks(blocks: &[u32], block_bits: u32, payload_bits: usize) -> BitMessage {
    let mut out = BitMessage::new();
    for &b in blocks {
        out.push_be(u64::from(b), block_bits);
    }
    out.truncated(payload_bits)
}
