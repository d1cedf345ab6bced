use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("symbol {symbol} outside model alphabet of {alphabet} data symbols")]
    SymbolOutOfAlphabet { symbol: u32, alphabet: usize },

    #[error("truncated payload")]
    TruncatedPayload,

    #[error("empty payload")]
    EmptyPayload,

    #[error("payload of {bits} bits exceeds the cap of {cap} bits")]
    PayloadTooLarge { bits: usize, cap: usize },

    #[error("intractable, use TCCSK: {0}-bit multi-key decoding needs 2^{0} hypotheses")]
    Intractable(u32),

    #[error("malformed {what}: {reason}")]
    Format { what: &'static str, reason: String },

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Format {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
