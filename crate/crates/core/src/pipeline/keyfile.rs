//! Key files.
//!
//! Two encodings are accepted on read:
//!
//! * text: `SWIFTKEY v1\n` followed by 64 lowercase hex digits and a newline
//!   (the format written by [`keygen`]);
//! * raw: exactly 32 bytes.

use std::fs;
use std::path::Path;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::sphere::{SecretKey, KEY_LEN};

pub const KEYFILE_MAGIC: &str = "SWIFTKEY v1\n";

/// Environment variable naming the default key file.
pub const KEY_ENV_VAR: &str = "TCCSK_KEY";

pub fn encode_key(key: &SecretKey) -> String {
    format!("{KEYFILE_MAGIC}{}\n", hex::encode(key.as_bytes()))
}

pub fn decode_key(bytes: &[u8]) -> Result<SecretKey> {
    if let Some(rest) = bytes.strip_prefix(KEYFILE_MAGIC.as_bytes()) {
        let text = std::str::from_utf8(rest).map_err(|_| Error::format("key file", "not UTF-8"))?;
        let raw = hex::decode(text.trim()).map_err(|e| Error::format("key file", e.to_string()))?;
        return SecretKey::from_slice(&raw).map_err(|e| Error::format("key file", e.to_string()));
    }
    if bytes.len() == KEY_LEN {
        return SecretKey::from_slice(bytes);
    }
    Err(Error::format(
        "key file",
        format!("expected {KEYFILE_MAGIC:?} header or {KEY_LEN} raw bytes"),
    ))
}

pub fn read_key(path: impl AsRef<Path>) -> Result<SecretKey> {
    decode_key(&fs::read(path)?)
}

pub fn write_key(path: impl AsRef<Path>, key: &SecretKey) -> Result<()> {
    fs::write(path, encode_key(key))?;
    Ok(())
}

/// Fresh key from OS-seeded randomness, or a reproducible one from `seed`.
pub fn generate_key(seed: Option<u64>) -> SecretKey {
    match seed {
        Some(s) => SecretKey::from_seed(s),
        None => {
            let mut bytes = [0u8; KEY_LEN];
            rand::rng().fill_bytes(&mut bytes);
            SecretKey::from_bytes(bytes)
        }
    }
}

pub fn keygen(path: impl AsRef<Path>, seed: Option<u64>) -> Result<SecretKey> {
    let key = generate_key(seed);
    write_key(path, &key)?;
    Ok(key)
}
