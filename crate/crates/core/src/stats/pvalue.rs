//! p-values for cosine tests, argmax corrections and their Fisher combination.
//! Everything is carried as natural-log probabilities.

use std::f64::consts::LN_2;
use std::fmt;

use crate::error::{Error, Result};

use super::special::{ln_reg_inc_beta, ln_reg_upper_gamma};

/// Natural-log probability, `ln_p <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogP(f64);

impl LogP {
    pub const ONE: LogP = LogP(0.0);
    pub const ZERO: LogP = LogP(f64::NEG_INFINITY);

    pub fn new(ln_p: f64) -> Result<Self> {
        if ln_p.is_nan() || ln_p > 0.0 {
            return Err(Error::OutOfRange(format!("log-probability {ln_p} > 0")));
        }
        Ok(LogP(ln_p))
    }

    /// Clamps tiny positive rounding excursions to zero.
    pub(crate) fn saturating(ln_p: f64) -> Self {
        debug_assert!(!ln_p.is_nan());
        LogP(ln_p.min(0.0))
    }

    pub fn from_p(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("probability {p} not in [0, 1]")));
        }
        Ok(LogP(p.ln()))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn p(self) -> f64 {
        self.0.exp()
    }

    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }

    pub fn log2(self) -> f64 {
        self.0 / LN_2
    }
}

impl fmt::Display for LogP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={:.3e} (log10 {:.2})", self.p(), self.log10())
    }
}

/// Cosine threshold `c` with `|c| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(c: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&c) {
            return Err(Error::OutOfRange(format!("cosine threshold {c} outside [-1, 1]")));
        }
        Ok(Threshold(c))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `P(C >= c)` for the cosine `C` between a fixed direction and a uniform
/// random direction on `S^{dim-1}`.
///
/// For `c >= 0` this is `1/2 I_{1-c^2}((D-1)/2, 1/2)`; negative thresholds use
/// the complement `1 - 1/2 I_{1-c^2}((D-1)/2, 1/2)`.
pub fn rho0(c: Threshold, dim: usize) -> Result<LogP> {
    if dim < 2 {
        return Err(Error::param(format!("rho0 needs dim >= 2, got {dim}")));
    }
    let c = c.value();
    let a = (dim as f64 - 1.0) / 2.0;
    let x = ((1.0 - c) * (1.0 + c)).clamp(0.0, 1.0);
    let ln_i = ln_reg_inc_beta(x, a, 0.5)?;
    let ln_half_i = ln_i - LN_2;
    if c >= 0.0 {
        Ok(LogP::saturating(ln_half_i))
    } else {
        Ok(LogP::saturating((-ln_half_i.exp()).ln_1p()))
    }
}

/// `ln rho1 = ln(1 - (1 - rho0)^K)` with `K = 2^log2_k`: the chance that the
/// best of `K` independent null cosines clears the threshold.
pub fn log_rho1(log_rho0: LogP, log2_k: f64) -> LogP {
    assert!(log2_k >= 0.0 && log2_k.is_finite(), "log2_k must be finite and >= 0");
    let l0 = log_rho0.ln();
    if l0 == f64::NEG_INFINITY {
        return LogP::ZERO;
    }
    // first-order bound K * rho0, also the asymptote once rho0 underflows
    let upper = l0 + log2_k * LN_2;
    let rho = l0.exp();
    let val = if l0 < -700.0 {
        upper
    } else {
        let k = log2_k.exp2();
        (-(k * (-rho).ln_1p()).exp_m1()).ln()
    };
    LogP::saturating(val.min(upper).max(l0))
}

/// Fisher's method: `ln rho` where `rho = Q(T, -sum ln p_j)`, i.e. the
/// chi-square survival with `2T` degrees of freedom at `-2 sum ln p_j`.
pub fn fisher_combine(log_ps: &[LogP]) -> Result<LogP> {
    if log_ps.is_empty() {
        return Err(Error::param("fisher_combine needs at least one p-value"));
    }
    let stat: f64 = log_ps.iter().map(|p| -p.ln()).sum();
    if stat == f64::INFINITY {
        return Ok(LogP::ZERO);
    }
    Ok(LogP::saturating(ln_reg_upper_gamma(log_ps.len() as f64, stat)?))
}

/// Largest payload length `-log2 rho0` that a `2^N`-hypothesis decode can
/// carry before the argmax correction swamps the confidence.
pub fn trust_ceiling_bits(log_rho0: LogP) -> f64 {
    -log_rho0.log2()
}
