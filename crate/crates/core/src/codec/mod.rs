//! Lossless payload compression: a 32-bit arithmetic coder driven by
//! pluggable symbol models.

mod bits;
mod coder;
mod model;

pub use bits::BitMessage;
pub use coder::{
    ac_decode, ac_decode_with, ac_encode, ac_encode_with, decode_bytes, encode_bytes,
    ideal_code_length, Decoded, Termination,
};
pub use model::{
    static_model_from_file, symbol_cost_bits, AdaptiveModel, StaticModel, SymbolModel,
    BYTE_ALPHABET, MAX_ALPHABET, MAX_ORDER, MAX_TOTAL,
};
