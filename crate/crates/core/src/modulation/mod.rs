//! Bit messages to unit vectors and back: TCCSK, the BPSK and multi-key
//! baselines, the keyed-padding comparator, and the vector file format.

mod blocks;
mod bpsk;
mod demod;
mod multikey;
mod pad;
mod params;
mod tccsk;
mod vecfile;

pub use blocks::{join_blocks, split_blocks, BlockSplit};
pub use bpsk::{bpsk_demodulate, bpsk_modulate, BpskCodebook};
pub use demod::{argmax, demod_correlations, DemodPath, FftPlans, PreparedCarrier};
pub use multikey::{
    max_trusted_bits, multikey_decode, multikey_modulate, MultikeyCodebook, MultikeyDecision,
    MAX_MULTIKEY_BITS,
};
pub use pad::{keyed_pad_check, keyed_pad_embed, PadCheck};
pub use params::{TcParams, DEFAULT_BLOCK_BITS, DEFAULT_DIM, SHIFT_CONVENTION};
pub use tccsk::{tccsk_demodulate, tccsk_modulate, DecodeResult, TccskModem};
pub use vecfile::{VectorFile, VECFILE_MAGIC};
