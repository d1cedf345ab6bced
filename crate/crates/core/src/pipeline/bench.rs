//! Monte-Carlo harnesses: bit/message error rates over an SNR grid, and
//! confidence screening over channel scenarios.
//!
//! Every trial draws its payload and noise from a seed derived from the
//! master seed and the trial's position, so output does not depend on the
//! execution mode.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::channel::{apply_chain, trial_seed, ChannelSpec, NoiseLevel, Stage};
use crate::codec::BitMessage;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::modulation::{BpskCodebook, TccskModem};
use crate::sphere::SecretKey;

use super::config::{PipelineConfig, Scheme};

/// Decodes below this p-value must be exact; anything else is reported.
pub const TRUST_CHECK_THRESHOLD: f64 = 1e-13;

pub const BER_CSV_VERSION: &str = "tccsk-bench-ber v1";
pub const CONFIDENCE_CSV_VERSION: &str = "tccsk-bench-confidence v1";
pub const SNR_CONVENTION: &str =
    "snr_db = 10*log10(1/(D*sigma^2)) for a unit-norm signal and per-coordinate noise deviation sigma";

const CONFIDENCE_DOMAIN: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub scheme: Scheme,
    pub payload_bits: usize,
    pub channel: String,
    pub exact_match: bool,
    pub bit_errors: usize,
    /// `None` for schemes without a confidence score.
    pub log10_rho: Option<f64>,
}

impl TrialRecord {
    pub fn bit_accuracy(&self) -> f64 {
        1.0 - self.bit_errors as f64 / self.payload_bits as f64
    }
}

/// Fraction of exactly recovered messages.
pub fn compute_mrr(records: &[TrialRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::param("MRR of zero trials"));
    }
    Ok(records.iter().filter(|r| r.exact_match).count() as f64 / records.len() as f64)
}

/// Wilson score interval at 95% for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Sample Pearson correlation; `None` if either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

fn random_bits(seed: u64, n: usize) -> BitMessage {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<bool>()).collect()
}

/// Key shared by every trial of a run.
pub fn run_key(master_seed: u64) -> SecretKey {
    SecretKey::from_seed(master_seed)
}

struct Schemes {
    tccsk: TccskModem,
    bpsk: Option<BpskCodebook>,
}

impl Schemes {
    fn new(cfg: &PipelineConfig, exec: Execution, need_bpsk: bool) -> Result<Self> {
        let key = run_key(cfg.seed);
        let tccsk = TccskModem::with_options(key.clone(), cfg.params, Default::default(), exec);
        tccsk.warm(cfg.params.blocks_for(cfg.payload_bits))?;
        let bpsk = if need_bpsk {
            Some(BpskCodebook::new(&key, cfg.payload_bits, cfg.params.dim())?)
        } else {
            None
        };
        Ok(Schemes { tccsk, bpsk })
    }

    fn trial(&self, scheme: Scheme, trial: u64, seed: u64, bits: usize, channel: &ChannelSpec) -> Result<TrialRecord> {
        let msg = random_bits(seed, bits);
        let channel = channel.clone().with_seed(seed);
        let (decoded, log10_rho) = match scheme {
            Scheme::Tccsk => {
                let y = apply_chain(&self.tccsk.modulate(&msg)?, &channel)?;
                let r = self.tccsk.demodulate(&y, bits)?;
                (r.bits, Some(r.rho.log10()))
            }
            Scheme::Bpsk => {
                let book = self.bpsk.as_ref().expect("bpsk codebook");
                let y = apply_chain(&book.modulate(&msg)?, &channel)?;
                (book.demodulate(y.as_slice())?, None)
            }
        };
        let bit_errors = decoded.hamming(&msg);
        Ok(TrialRecord {
            trial,
            seed,
            scheme,
            payload_bits: bits,
            channel: channel.to_string(),
            exact_match: bit_errors == 0,
            bit_errors,
            log10_rho,
        })
    }
}

fn run_trials(
    schemes: &Schemes,
    exec: Execution,
    scheme: Scheme,
    point_seed: u64,
    cfg: &PipelineConfig,
    channel: &ChannelSpec,
) -> Result<Vec<TrialRecord>> {
    exec.map_indexed(cfg.trials, |k| {
        let k = k as u64;
        schemes.trial(scheme, k, trial_seed(point_seed, k), cfg.payload_bits, channel)
    })
    .into_iter()
    .collect()
}

fn is_counterexample(r: &TrialRecord) -> bool {
    !r.exact_match && r.log10_rho.is_some_and(|l| l < TRUST_CHECK_THRESHOLD.log10())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRow {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub trials: usize,
    pub ber: f64,
    pub mer: f64,
    pub mrr: f64,
    pub mean_log10_rho: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone)]
pub struct BerReport {
    pub rows: Vec<BerRow>,
    pub records: Vec<TrialRecord>,
    /// Trials decoded wrongly despite `rho < 1e-13`.
    pub counterexamples: Vec<TrialRecord>,
}

fn summarize(scheme: Scheme, snr_db: f64, records: &[TrialRecord]) -> Result<BerRow> {
    let n = records.len();
    let total_bits: u64 = records.iter().map(|r| r.payload_bits as u64).sum();
    let bit_errors: u64 = records.iter().map(|r| r.bit_errors as u64).sum();
    let mrr = compute_mrr(records)?;
    let rhos: Vec<f64> = records.iter().filter_map(|r| r.log10_rho).collect();
    let (ci_low, ci_high) = wilson_interval(bit_errors, total_bits);
    Ok(BerRow {
        scheme,
        snr_db,
        trials: n,
        ber: bit_errors as f64 / total_bits as f64,
        mer: records.iter().filter(|r| !r.exact_match).count() as f64 / n as f64,
        mrr,
        mean_log10_rho: (!rhos.is_empty()).then(|| rhos.iter().sum::<f64>() / rhos.len() as f64),
        ci_low,
        ci_high,
    })
}

/// Error rates of each scheme under AWGN at every grid SNR.
///
/// All schemes see the same payloads and noise seeds at a grid point.
pub fn bench_ber(cfg: &PipelineConfig, exec: Execution) -> Result<BerReport> {
    cfg.validate()?;
    let schemes = Schemes::new(cfg, exec, cfg.schemes.contains(&Scheme::Bpsk))?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (i, &snr_db) in cfg.snr_grid.iter().enumerate() {
        let point_seed = trial_seed(cfg.seed, i as u64);
        let channel = ChannelSpec::new(vec![Stage::Awgn(NoiseLevel::SnrDb(snr_db))], 0)?;
        for &scheme in &cfg.schemes {
            let recs = run_trials(&schemes, exec, scheme, point_seed, cfg, &channel)?;
            rows.push(summarize(scheme, snr_db, &recs)?);
            records.extend(recs);
        }
    }
    let counterexamples = records.iter().filter(|r| is_counterexample(r)).cloned().collect();
    Ok(BerReport {
        rows,
        records,
        counterexamples,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceRow {
    pub scenario: String,
    pub threshold: f64,
    pub trials: usize,
    pub passed: usize,
    /// Fraction of trials with `rho <= threshold`.
    pub cdf: f64,
    /// Exact-recovery rate among passing trials; `None` if none passed.
    pub mrr: Option<f64>,
    pub wrong_trusted: usize,
}

#[derive(Debug, Clone)]
pub struct ConfidenceReport {
    pub rows: Vec<ConfidenceRow>,
    pub records: Vec<TrialRecord>,
    /// Correlation of `log10 rho` with per-trial bit accuracy over all trials.
    pub pearson: Option<f64>,
    pub counterexamples: Vec<TrialRecord>,
}

/// TCCSK decodes screened by each threshold in every channel scenario.
pub fn bench_confidence(cfg: &PipelineConfig, exec: Execution) -> Result<ConfidenceReport> {
    cfg.validate()?;
    let schemes = Schemes::new(cfg, exec, false)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (i, scenario) in cfg.scenarios.iter().enumerate() {
        let point_seed = trial_seed(cfg.seed, CONFIDENCE_DOMAIN | i as u64);
        let recs = run_trials(&schemes, exec, Scheme::Tccsk, point_seed, cfg, scenario)?;
        for &threshold in &cfg.thresholds {
            let cut = threshold.log10();
            let passing: Vec<&TrialRecord> = recs
                .iter()
                .filter(|r| r.log10_rho.is_some_and(|l| l <= cut))
                .collect();
            let exact = passing.iter().filter(|r| r.exact_match).count();
            rows.push(ConfidenceRow {
                scenario: scenario.to_string(),
                threshold,
                trials: recs.len(),
                passed: passing.len(),
                cdf: passing.len() as f64 / recs.len() as f64,
                mrr: (!passing.is_empty()).then(|| exact as f64 / passing.len() as f64),
                wrong_trusted: passing.len() - exact,
            });
        }
        records.extend(recs);
    }
    let xs: Vec<f64> = records.iter().filter_map(|r| r.log10_rho).collect();
    let ys: Vec<f64> = records.iter().map(TrialRecord::bit_accuracy).collect();
    let counterexamples = records.iter().filter(|r| is_counterexample(r)).cloned().collect();
    Ok(ConfidenceReport {
        rows,
        pearson: pearson(&xs, &ys),
        records,
        counterexamples,
    })
}

fn header(version: &str, cfg: &PipelineConfig, extra: &[&str]) -> String {
    let mut out = format!("# {version}\n# {SNR_CONVENTION}\n");
    for line in extra {
        out.push_str(&format!("# {line}\n"));
    }
    for line in cfg.to_text().lines() {
        out.push_str(&format!("# config: {line}\n"));
    }
    out
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn write_rows(head: String, columns: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(head.into_bytes());
    w.write_record(columns).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::format("csv", e.to_string())
}

pub const BER_COLUMNS: [&str; 9] = [
    "scheme",
    "snr_db",
    "trials",
    "ber",
    "mer",
    "mrr",
    "mean_log10_rho",
    "ci_low",
    "ci_high",
];

pub const CONFIDENCE_COLUMNS: [&str; 7] =
    ["scenario", "threshold", "trials", "passed", "cdf", "mrr", "wrong_trusted"];

impl BerReport {
    pub fn to_csv(&self, cfg: &PipelineConfig) -> Result<String> {
        let head = header(
            BER_CSV_VERSION,
            cfg,
            &["ci_low,ci_high: Wilson 95% interval for ber", "mean_log10_rho is empty for schemes without a confidence score"],
        );
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.scheme.to_string(),
                    r.snr_db.to_string(),
                    r.trials.to_string(),
                    r.ber.to_string(),
                    r.mer.to_string(),
                    r.mrr.to_string(),
                    opt(r.mean_log10_rho),
                    r.ci_low.to_string(),
                    r.ci_high.to_string(),
                ]
            })
            .collect();
        write_rows(head, &BER_COLUMNS, rows)
    }
}

impl ConfidenceReport {
    pub fn to_csv(&self, cfg: &PipelineConfig) -> Result<String> {
        let pearson = format!("pearson(log10_rho, bit_accuracy) = {}", opt(self.pearson));
        let head = header(
            CONFIDENCE_CSV_VERSION,
            cfg,
            &["passed: trials with rho <= threshold; mrr is conditional on passing", &pearson],
        );
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.scenario.clone(),
                    format!("{:e}", r.threshold),
                    r.trials.to_string(),
                    r.passed.to_string(),
                    r.cdf.to_string(),
                    opt(r.mrr),
                    r.wrong_trusted.to_string(),
                ]
            })
            .collect();
        write_rows(head, &CONFIDENCE_COLUMNS, rows)
    }
}
