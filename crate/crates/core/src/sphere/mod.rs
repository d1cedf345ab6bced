//! Keyed carrier generation and the hypersphere primitives used by every
//! modulation scheme.

mod carrier;
mod key;
mod stream;
mod vector;

pub use carrier::{all_shift_norms, shift_truncate, Carrier, MAX_BLOCK_BITS};
pub use key::{CarrierLabel, Purpose, SecretKey, KEY_LEN};
pub use stream::{derive_stream, gaussian_draws, KeyStream, PRF_ID};
pub use vector::{
    cosine, dot, l2_norm, normalize, random_unit_vector, UnitVector, UNIT_TOLERANCE,
};
