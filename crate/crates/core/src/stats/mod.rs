//! Special functions and the p-value calculus behind decode confidence.

mod pvalue;
mod special;

pub use pvalue::{fisher_combine, log_rho1, rho0, trust_ceiling_bits, LogP, Threshold};
pub use special::{
    ln_beta, ln_reg_inc_beta, ln_reg_upper_gamma, reg_inc_beta, reg_lower_gamma,
};
