//! Seedable noise channels used to stress the demodulator.

mod ops;
mod spec;

pub use ops::{
    apply_chain, apply_chain_raw, awgn, effective_snr_db, erase_coords, gain, sigma_to_snr_db,
    snr_db_to_sigma, trial_seed,
};
pub use spec::{ChannelSpec, NoiseLevel, Stage, CHANNEL_GRAMMAR_VERSION};
