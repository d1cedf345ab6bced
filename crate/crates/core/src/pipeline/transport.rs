//! Text to vector file and back.

use crate::codec::{ac_decode_with, ac_encode_with, BitMessage, Termination};
use crate::error::{Error, Result};
use crate::modulation::{split_blocks, DecodeResult, TccskModem, VectorFile};
use crate::sphere::SecretKey;

use super::config::{ModelChoice, PipelineConfig};

fn termination(length_free: bool) -> Termination {
    if length_free {
        Termination::SelfDelimiting
    } else {
        Termination::Exact
    }
}

/// Arithmetic-codes `payload` (bytes then EOF) with a fresh model.
pub fn compress(payload: &[u8], model: &ModelChoice, length_free: bool) -> Result<BitMessage> {
    let symbols: Vec<u32> = payload.iter().map(|&b| u32::from(b)).collect();
    ac_encode_with(&symbols, &mut model.build()?, termination(length_free))
}

/// Inverse of [`compress`]; also returns how many bits the stream occupied.
pub fn decompress(bits: &BitMessage, model: &ModelChoice, length_free: bool) -> Result<(Vec<u8>, usize)> {
    let decoded = ac_decode_with(bits, &mut model.build()?, termination(length_free))?;
    let bytes = decoded
        .symbols
        .iter()
        .map(|&s| {
            u8::try_from(s).map_err(|_| Error::format("byte payload", format!("symbol {s} is not a byte")))
        })
        .collect::<Result<_>>()?;
    Ok((bytes, decoded.bits_used))
}

#[derive(Debug, Clone)]
pub struct EmbedReport {
    pub file: VectorFile,
    pub payload_bits: usize,
    pub blocks: usize,
    pub pad_bits: usize,
}

pub fn embed(payload: &[u8], key: &SecretKey, cfg: &PipelineConfig) -> Result<EmbedReport> {
    if payload.is_empty() {
        return Err(Error::EmptyPayload);
    }
    let bits = compress(payload, &cfg.model, cfg.length_free)?;
    let cap = cfg.payload_cap();
    if bits.len() > cap {
        return Err(Error::PayloadTooLarge {
            bits: bits.len(),
            cap,
        });
    }
    let split = split_blocks(&bits, cfg.params.block_bits())?;
    let vector = TccskModem::new(key.clone(), cfg.params).modulate(&bits)?;
    let header_bits = if cfg.length_free {
        None
    } else {
        Some(u32::try_from(bits.len()).map_err(|_| Error::param("payload length overflows u32"))?)
    };
    Ok(EmbedReport {
        file: VectorFile::new(key, cfg.params, header_bits, vector)?,
        payload_bits: bits.len(),
        blocks: split.len(),
        pad_bits: split.pad_bits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Trusted,
    Untrusted,
}

#[derive(Debug, Clone)]
pub struct ExtractReport {
    /// Decoded payload, if the arithmetic stream was well formed.
    pub payload: Option<Vec<u8>>,
    pub decode: DecodeResult,
    pub verdict: Verdict,
    pub key_mismatch: bool,
    pub diagnostic: Option<String>,
}

impl ExtractReport {
    pub fn log10_rho(&self) -> f64 {
        self.decode.rho.log10()
    }

    pub fn text(&self) -> Option<String> {
        self.payload
            .as_ref()
            .map(|p| String::from_utf8_lossy(p).into_owned())
    }
}

/// Demodulates and decompresses. A key-fingerprint mismatch is reported,
/// not fatal: the confidence then behaves as under the null hypothesis.
pub fn extract(file: &VectorFile, key: &SecretKey, cfg: &PipelineConfig) -> Result<ExtractReport> {
    let modem = TccskModem::new(key.clone(), file.params);
    let l = file.params.block_bits();
    let (decode, decoded) = match file.payload_bits {
        Some(n) => {
            let decode = modem.demodulate(&file.vector, n as usize)?;
            let decoded = decompress(&decode.bits, &cfg.model, false).map(|(p, _)| p);
            (decode, decoded)
        }
        None => {
            let t_max = cfg.payload_cap().div_ceil(l as usize);
            let all = modem.demodulate_blocks(&file.vector, t_max, t_max * l as usize)?;
            match decompress(&all.bits, &cfg.model, true) {
                Ok((p, used)) => (all.prefix(used.div_ceil(l as usize).max(1), used, l)?, Ok(p)),
                Err(e) => (all, Err(e)),
            }
        }
    };
    let verdict = if decode.rho.p() < cfg.verdict_threshold {
        Verdict::Trusted
    } else {
        Verdict::Untrusted
    };
    let (payload, diagnostic) = match decoded {
        Ok(p) => (Some(p), None),
        Err(e) if verdict == Verdict::Trusted => (
            None,
            Some(format!("channel ok, codec desync: blocks decoded with high confidence but the payload did not ({e}); check the model choice")),
        ),
        Err(e) => (None, Some(format!("payload did not decode: {e}"))),
    };
    Ok(ExtractReport {
        payload,
        decode,
        verdict,
        key_mismatch: !file.key_matches(key),
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::TcParams;

    fn small_cfg() -> PipelineConfig {
        PipelineConfig {
            params: TcParams::new(256, 12).unwrap(),
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn roundtrip_with_and_without_length() {
        let key = SecretKey::from_seed(1);
        for length_free in [false, true] {
            let cfg = PipelineConfig {
                length_free,
                ..small_cfg()
            };
            let rep = embed(b"a cat", &key, &cfg).unwrap();
            assert_eq!(rep.blocks, rep.payload_bits.div_ceil(12));
            let out = extract(&rep.file, &key, &cfg).unwrap();
            assert_eq!(out.text().as_deref(), Some("a cat"));
            assert_eq!(out.verdict, Verdict::Trusted);
            assert!(!out.key_mismatch);
            assert_eq!(out.decode.blocks(), rep.blocks);
        }
    }

    #[test]
    fn wrong_key_is_flagged() {
        let cfg = small_cfg();
        let rep = embed(b"hello", &SecretKey::from_seed(1), &cfg).unwrap();
        let out = extract(&rep.file, &SecretKey::from_seed(2), &cfg).unwrap();
        assert!(out.key_mismatch);
        assert_eq!(out.verdict, Verdict::Untrusted);
    }

    #[test]
    fn model_mismatch_reports_desync() {
        let cfg = small_cfg();
        let key = SecretKey::from_seed(1);
        let rep = embed(b"abababab", &key, &cfg).unwrap();
        let other = PipelineConfig {
            model: ModelChoice::Adaptive { order: 2 },
            ..small_cfg()
        };
        let out = extract(&rep.file, &key, &other).unwrap();
        assert_eq!(out.verdict, Verdict::Trusted);
        if out.payload.is_none() {
            assert!(out.diagnostic.unwrap().starts_with("channel ok, codec desync"));
        } else {
            assert_ne!(out.payload.as_deref(), Some(&b"abababab"[..]));
        }
    }

    #[test]
    fn rejects_empty_and_oversized() {
        let key = SecretKey::from_seed(1);
        assert!(matches!(embed(b"", &key, &small_cfg()), Err(Error::EmptyPayload)));
        let cfg = PipelineConfig {
            payload_cap_bits: Some(16),
            ..small_cfg()
        };
        match embed(b"this will not fit in sixteen bits", &key, &cfg) {
            Err(Error::PayloadTooLarge { bits, cap }) => assert!(bits > 16 && cap == 16),
            other => panic!("{other:?}"),
        }
    }
}
