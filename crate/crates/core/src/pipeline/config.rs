//! Flat `key = value` run configuration.
//!
//! One setting per line, `#` starts a comment, unknown keys are errors.
//! Lists are comma separated, except `scenarios`, which separates channel
//! specs with `;`.
//!
//! | key | default |
//! |-----|---------|
//! | `dim` | 256 |
//! | `block_bits` | 16 |
//! | `model` | `adaptive:0` (or `static:PATH`) |
//! | `seed` | 0 |
//! | `trials` | 1000 |
//! | `payload_bits` | 32 |
//! | `payload_cap_bits` | `64 * block_bits` |
//! | `length_free` | false |
//! | `verdict_threshold` | 4.2e-13 |
//! | `thresholds` | `1,0.01,4.2e-13,2.3e-15,1.4e-16` |
//! | `snr_db` | `-10,-8,-6,-4,-2,0,2,40` |
//! | `schemes` | `tccsk,bpsk` |
//! | `scenarios` | see [`DEFAULT_SCENARIOS`] |

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::channel::ChannelSpec;
use crate::codec::{static_model_from_file, AdaptiveModel, SymbolModel, BYTE_ALPHABET, MAX_ORDER};
use crate::error::{Error, Result};
use crate::modulation::TcParams;

/// Verdict thresholds: three operating points from the watermark literature
/// and a loose 1% screen. A labeled preset, not a calibration.
pub const THRESHOLD_PRESETS: [f64; 4] = [4.2e-13, 2.3e-15, 1.4e-16, 0.01];

pub const DEFAULT_SCENARIOS: &str =
    "awgn:snr_db=0;awgn:snr_db=-2;awgn:snr_db=-4;erase:frac=0.4;erase:frac=0.4|awgn:snr_db=0";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelChoice {
    Adaptive { order: usize },
    Static(PathBuf),
}

impl ModelChoice {
    /// A fresh byte model; build one for each encode or decode.
    pub fn build(&self) -> Result<Box<dyn SymbolModel + Send>> {
        match self {
            ModelChoice::Adaptive { order } => Ok(Box::new(AdaptiveModel::bytes(*order)?)),
            ModelChoice::Static(path) => {
                let m = static_model_from_file(path)?;
                if m.alphabet_size() != BYTE_ALPHABET {
                    return Err(Error::Config(format!(
                        "static model {} has alphabet {}, byte payloads need {BYTE_ALPHABET}",
                        path.display(),
                        m.alphabet_size()
                    )));
                }
                Ok(Box::new(m))
            }
        }
    }
}

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelChoice::Adaptive { order } => write!(f, "adaptive:{order}"),
            ModelChoice::Static(p) => write!(f, "static:{}", p.display()),
        }
    }
}

impl FromStr for ModelChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().split_once(':') {
            Some(("adaptive", k)) => {
                let order: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad model order {k:?}")))?;
                if order > MAX_ORDER {
                    return Err(Error::Config(format!("model order {order} > {MAX_ORDER}")));
                }
                Ok(ModelChoice::Adaptive { order })
            }
            Some(("static", p)) if !p.trim().is_empty() => Ok(ModelChoice::Static(PathBuf::from(p.trim()))),
            _ => Err(Error::Config(format!("model must be adaptive:K or static:PATH, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Tccsk,
    Bpsk,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Tccsk => "tccsk",
            Scheme::Bpsk => "bpsk",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "tccsk" => Ok(Scheme::Tccsk),
            "bpsk" => Ok(Scheme::Bpsk),
            other => Err(Error::Config(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub params: TcParams,
    pub model: ModelChoice,
    pub seed: u64,
    pub trials: usize,
    pub payload_bits: usize,
    pub payload_cap_bits: Option<usize>,
    pub length_free: bool,
    pub verdict_threshold: f64,
    pub thresholds: Vec<f64>,
    pub snr_grid: Vec<f64>,
    pub schemes: Vec<Scheme>,
    pub scenarios: Vec<ChannelSpec>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            params: TcParams::default(),
            model: ModelChoice::Adaptive { order: 0 },
            seed: 0,
            trials: 1000,
            payload_bits: 32,
            payload_cap_bits: None,
            length_free: false,
            verdict_threshold: THRESHOLD_PRESETS[0],
            thresholds: vec![1.0, 0.01, 4.2e-13, 2.3e-15, 1.4e-16],
            snr_grid: vec![-10.0, -8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 40.0],
            schemes: vec![Scheme::Tccsk, Scheme::Bpsk],
            scenarios: parse_scenarios(DEFAULT_SCENARIOS).expect("default scenarios parse"),
        }
    }
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {s:?}"))))
        .collect()
}

fn parse_scalar<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_scenarios(v: &str) -> Result<Vec<ChannelSpec>> {
    v.split(';').map(str::parse).collect()
}

fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn join_exp(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",")
}

impl PipelineConfig {
    pub fn payload_cap(&self) -> usize {
        self.payload_cap_bits
            .unwrap_or(64 * self.params.block_bits() as usize)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        let value = value.trim();
        match key {
            "dim" => {
                self.params = TcParams::new(parse_scalar(key, value)?, self.params.block_bits())
                    .map_err(|e| Error::Config(format!("dim: {e}")))?
            }
            "block_bits" => {
                self.params = TcParams::new(self.params.dim(), parse_scalar(key, value)?)
                    .map_err(|e| Error::Config(format!("block_bits: {e}")))?
            }
            "model" => self.model = value.parse()?,
            "seed" => self.seed = parse_scalar(key, value)?,
            "trials" => self.trials = parse_scalar(key, value)?,
            "payload_bits" => self.payload_bits = parse_scalar(key, value)?,
            "payload_cap_bits" => self.payload_cap_bits = Some(parse_scalar(key, value)?),
            "length_free" => self.length_free = parse_scalar(key, value)?,
            "verdict_threshold" => self.verdict_threshold = parse_scalar(key, value)?,
            "thresholds" => self.thresholds = parse_list(key, value)?,
            "snr_db" => self.snr_grid = parse_list(key, value)?,
            "schemes" => self.schemes = parse_list(key, value)?,
            "scenarios" => self.scenarios = parse_scenarios(value)?,
            _ => return Err(Error::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        let mut dims: Option<(String, String)> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            // dim and block_bits constrain each other; apply them together
            match k.trim() {
                "dim" => dims.get_or_insert_with(Default::default).0 = v.trim().to_string(),
                "block_bits" => dims.get_or_insert_with(Default::default).1 = v.trim().to_string(),
                _ => cfg.set(k, v).map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?,
            }
        }
        if let Some((d, l)) = dims {
            let d = if d.is_empty() { cfg.params.dim() } else { parse_scalar("dim", &d)? };
            let l = if l.is_empty() { cfg.params.block_bits() } else { parse_scalar("block_bits", &l)? };
            cfg.params = TcParams::new(d, l).map_err(|e| Error::Config(e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.payload_bits == 0 {
            return bad("payload_bits must be positive".into());
        }
        if self.schemes.contains(&Scheme::Bpsk) && self.payload_bits > self.params.dim() {
            return bad(format!(
                "bpsk needs payload_bits <= dim, got {} > {}",
                self.payload_bits,
                self.params.dim()
            ));
        }
        if self.payload_cap() == 0 {
            return bad("payload_cap_bits must be positive".into());
        }
        for &t in self.thresholds.iter().chain([&self.verdict_threshold]) {
            if !(t > 0.0 && t <= 1.0) {
                return bad(format!("threshold {t} outside (0, 1]"));
            }
        }
        if self.snr_grid.iter().any(|s| !s.is_finite()) {
            return bad("snr_db values must be finite".into());
        }
        if self.schemes.is_empty() || self.snr_grid.is_empty() || self.scenarios.is_empty() {
            return bad("schemes, snr_db and scenarios must be non-empty".into());
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        Ok(())
    }

    /// Canonical text form, parseable by [`PipelineConfig::from_text`].
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("dim = {}", self.params.dim()),
            format!("block_bits = {}", self.params.block_bits()),
            format!("model = {}", self.model),
            format!("seed = {}", self.seed),
            format!("trials = {}", self.trials),
            format!("payload_bits = {}", self.payload_bits),
        ];
        if let Some(cap) = self.payload_cap_bits {
            lines.push(format!("payload_cap_bits = {cap}"));
        }
        lines.extend([
            format!("length_free = {}", self.length_free),
            format!("verdict_threshold = {:e}", self.verdict_threshold),
            format!("thresholds = {}", join_exp(&self.thresholds)),
            format!("snr_db = {}", join(&self.snr_grid, ",")),
            format!("schemes = {}", join(&self.schemes, ",")),
            format!("scenarios = {}", join(&self.scenarios, ";")),
        ]);
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_roundtrip_through_text() {
        let cfg = PipelineConfig::default();
        cfg.validate().unwrap();
        assert_eq!(PipelineConfig::from_text(&cfg.to_text()).unwrap(), cfg);
        assert_eq!(cfg.payload_cap(), 1024);
    }

    #[test]
    fn parses_overrides() {
        let cfg = PipelineConfig::from_text(
            "# run\nblock_bits = 8\ndim=200\nthresholds = 0.5, 1e-3\nscenarios = awgn:snr_db=1;erase:frac=0.1|raw\nmodel=adaptive:2\n",
        )
        .unwrap();
        assert_eq!((cfg.params.dim(), cfg.params.block_bits()), (200, 8));
        assert_eq!(cfg.thresholds, vec![0.5, 1e-3]);
        assert_eq!(cfg.scenarios.len(), 2);
        assert!(!cfg.scenarios[1].renormalize);
        assert_eq!(cfg.model, ModelChoice::Adaptive { order: 2 });
        assert_eq!(PipelineConfig::from_text(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_settings() {
        for text in ["bogus = 1", "trials = 0", "thresholds = 2", "dim = 1", "model = lstm", "seed"] {
            assert!(PipelineConfig::from_text(text).is_err(), "{text}");
        }
    }
}
