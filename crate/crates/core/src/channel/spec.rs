//! Declarative noise chains and their text form.
//!
//! Grammar, version 1:
//!
//! ```text
//! chain  := "" | "none" | stage ("|" stage)*
//! stage  := "awgn:sigma=" REAL | "awgn:snr_db=" REAL
//!         | "erase:frac=" REAL | "gain:g=" REAL | "raw"
//! ```
//!
//! `raw` disables the final renormalization. Whitespace around tokens is
//! ignored.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const CHANNEL_GRAMMAR_VERSION: u32 = 1;

/// Noise strength of an AWGN stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseLevel {
    Sigma(f64),
    SnrDb(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stage {
    Awgn(NoiseLevel),
    Erase(f64),
    Gain(f64),
}

impl Stage {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Stage::Awgn(NoiseLevel::Sigma(s)) => s > 0.0 && s.is_finite(),
            Stage::Awgn(NoiseLevel::SnrDb(s)) => s.is_finite(),
            Stage::Erase(f) => (0.0..1.0).contains(&f),
            Stage::Gain(g) => g > 0.0 && g.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!("invalid channel stage {self}")))
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Awgn(NoiseLevel::Sigma(s)) => write!(f, "awgn:sigma={s}"),
            Stage::Awgn(NoiseLevel::SnrDb(s)) => write!(f, "awgn:snr_db={s}"),
            Stage::Erase(x) => write!(f, "erase:frac={x}"),
            Stage::Gain(g) => write!(f, "gain:g={g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub stages: Vec<Stage>,
    pub seed: u64,
    pub renormalize: bool,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec {
            stages: Vec::new(),
            seed: 0,
            renormalize: true,
        }
    }
}

impl ChannelSpec {
    pub fn new(stages: Vec<Stage>, seed: u64) -> Result<Self> {
        let spec = ChannelSpec {
            stages,
            seed,
            renormalize: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.stages.iter().try_for_each(Stage::validate)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.stages.is_empty()
    }
}

/// Text form without the seed, e.g. `awgn:snr_db=2|erase:frac=0.4`.
impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.stages.iter().map(Stage::to_string).collect();
        if !self.renormalize {
            parts.push("raw".into());
        }
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join("|"))
        }
    }
}

fn parse_stage(tok: &str) -> Result<Option<Stage>> {
    if tok == "raw" {
        return Ok(None);
    }
    let bad = |why: &str| Error::format("channel spec", format!("{tok:?}: {why}"));
    let (name, arg) = tok.split_once(':').ok_or_else(|| bad("expected name:key=value"))?;
    let (k, v) = arg.split_once('=').ok_or_else(|| bad("expected key=value"))?;
    let v: f64 = v.trim().parse().map_err(|_| bad("not a number"))?;
    let stage = match (name.trim(), k.trim()) {
        ("awgn", "sigma") => Stage::Awgn(NoiseLevel::Sigma(v)),
        ("awgn", "snr_db") => Stage::Awgn(NoiseLevel::SnrDb(v)),
        ("erase", "frac") => Stage::Erase(v),
        ("gain", "g") => Stage::Gain(v),
        _ => return Err(bad("unknown stage or parameter")),
    };
    stage.validate()?;
    Ok(Some(stage))
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = ChannelSpec::default();
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return Ok(spec);
        }
        for tok in s.split('|').map(str::trim) {
            match parse_stage(tok)? {
                Some(stage) => spec.stages.push(stage),
                None => spec.renormalize = false,
            }
        }
        Ok(spec)
    }
}
