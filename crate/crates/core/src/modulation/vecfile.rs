//! `SWIFTVEC v1` watermark-vector files.
//!
//! Layout (integers little-endian):
//!
//! | bytes | field |
//! |-------|-------|
//! | 12 | magic `SWIFTVEC v1\n` |
//! | 1 | PRF id length `k` |
//! | k | PRF id, ASCII |
//! | 4 | `D` (u32) |
//! | 4 | `L` (u32) |
//! | 4 | `N` payload bits (u32); 0 means length-free |
//! | 8 | key fingerprint (u64) |
//! | 8·D | coordinates (f64) |

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sphere::{SecretKey, UnitVector, PRF_ID};

use super::params::TcParams;

pub const VECFILE_MAGIC: &[u8; 12] = b"SWIFTVEC v1\n";

const WHAT: &str = "vector file";

#[derive(Debug, Clone, PartialEq)]
pub struct VectorFile {
    pub prf_id: String,
    pub params: TcParams,
    /// `None` in length-free mode.
    pub payload_bits: Option<u32>,
    pub key_fingerprint: u64,
    pub vector: UnitVector,
}

impl VectorFile {
    pub fn new(key: &SecretKey, params: TcParams, payload_bits: Option<u32>, vector: UnitVector) -> Result<Self> {
        if vector.dim() != params.dim() {
            return Err(Error::DimensionMismatch {
                left: vector.dim(),
                right: params.dim(),
            });
        }
        if payload_bits == Some(0) {
            return Err(Error::EmptyPayload);
        }
        Ok(VectorFile {
            prf_id: PRF_ID.to_string(),
            params,
            payload_bits,
            key_fingerprint: key.fingerprint(),
            vector,
        })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let id = self.prf_id.as_bytes();
        let id_len = u8::try_from(id.len()).map_err(|_| Error::format(WHAT, "PRF id too long"))?;
        let mut buf = Vec::with_capacity(64 + 8 * self.vector.dim());
        buf.extend_from_slice(VECFILE_MAGIC);
        buf.push(id_len);
        buf.extend_from_slice(id);
        buf.extend_from_slice(&(self.params.dim() as u32).to_le_bytes());
        buf.extend_from_slice(&self.params.block_bits().to_le_bytes());
        buf.extend_from_slice(&self.payload_bits.unwrap_or(0).to_le_bytes());
        buf.extend_from_slice(&self.key_fingerprint.to_le_bytes());
        for x in self.vector.as_slice() {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_to(&mut v).expect("writing to a Vec cannot fail");
        v
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(VECFILE_MAGIC.len())? != VECFILE_MAGIC {
            return Err(Error::format(WHAT, "bad magic"));
        }
        let id_len = cur.take(1)?[0] as usize;
        let prf_id = std::str::from_utf8(cur.take(id_len)?)
            .map_err(|_| Error::format(WHAT, "PRF id is not UTF-8"))?
            .to_string();
        if prf_id != PRF_ID {
            return Err(Error::format(WHAT, format!("unsupported PRF {prf_id:?}")));
        }
        let dim = cur.u32()? as usize;
        let block_bits = cur.u32()?;
        let params = TcParams::new(dim, block_bits).map_err(|e| Error::format(WHAT, e.to_string()))?;
        let n = cur.u32()?;
        let key_fingerprint = u64::from_le_bytes(cur.take(8)?.try_into().expect("8 bytes"));
        let body = cur.take(8 * dim)?;
        if cur.pos != bytes.len() {
            return Err(Error::format(WHAT, "trailing bytes after coordinates"));
        }
        let coords = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let vector = UnitVector::new(coords).map_err(|e| Error::format(WHAT, e.to_string()))?;
        Ok(VectorFile {
            prf_id,
            params,
            payload_bits: (n != 0).then_some(n),
            key_fingerprint,
            vector,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }

    pub fn key_matches(&self, key: &SecretKey) -> bool {
        self.key_fingerprint == key.fingerprint()
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::format(WHAT, "unexpected end of file"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{random_unit_vector, CarrierLabel};

    fn sample() -> VectorFile {
        let key = SecretKey::from_seed(8);
        let v = random_unit_vector(&key, CarrierLabel::multikey_msg(0), 16).unwrap();
        VectorFile::new(&key, TcParams::new(16, 8).unwrap(), Some(45), v).unwrap()
    }

    #[test]
    fn layout_is_fixed() {
        let f = sample();
        let b = f.to_bytes();
        let id = PRF_ID.len();
        assert_eq!(b.len(), 12 + 1 + id + 4 + 4 + 4 + 8 + 8 * 16);
        assert_eq!(&b[..12], b"SWIFTVEC v1\n");
        assert_eq!(b[12] as usize, id);
        let h = 13 + id;
        assert_eq!(&b[h..h + 4], &16u32.to_le_bytes());
        assert_eq!(&b[h + 4..h + 8], &8u32.to_le_bytes());
        assert_eq!(&b[h + 8..h + 12], &45u32.to_le_bytes());
        assert_eq!(&b[h + 12..h + 20], &SecretKey::from_seed(8).fingerprint().to_le_bytes());
        assert_eq!(&b[h + 20..h + 28], &f.vector.as_slice()[0].to_le_bytes());
        assert_eq!(VectorFile::from_bytes(&b).unwrap(), f);
    }

    #[test]
    fn corrupt_headers_are_rejected() {
        let b = sample().to_bytes();
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(matches!(VectorFile::from_bytes(&bad), Err(Error::Format { .. })));
        assert!(VectorFile::from_bytes(&b[..b.len() - 1]).is_err());
        let mut long = b.clone();
        long.push(0);
        assert!(VectorFile::from_bytes(&long).is_err());
    }

    #[test]
    fn length_free_flag() {
        let mut f = sample();
        f.payload_bits = None;
        let back = VectorFile::from_bytes(&f.to_bytes()).unwrap();
        assert_eq!(back.payload_bits, None);
    }
}
