//! Keyed hypersphere modulation with calibrated decode confidence.
//!
//! Messages are compressed with an arithmetic coder ([`codec`]), split into
//! `L`-bit blocks, and mapped onto a unit vector by truncated cyclic-shift
//! keying ([`modulation`]). The receiver recovers each block with a matched
//! filter and reports a combined p-value ([`stats`]) telling how likely the
//! decode is under the no-watermark hypothesis.

pub mod channel;
pub mod codec;
pub mod exec;
pub mod modulation;
pub mod pipeline;
pub mod error;
pub mod sphere;
pub mod stats;

pub use error::{Error, Result};
