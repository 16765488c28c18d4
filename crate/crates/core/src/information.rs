//! Schmidt information and accidental-coincidence calculus.
//!
//! Two observers holding `n` perfectly correlated symbols drawn from a
//! Schmidt spectrum with Schmidt number `K` would match by chance with
//! probability `K^-n`. The information `n log K` measures how far the actual
//! correlation is from that chance level.

use crate::{Error, LogBase, Result};
use serde::{Deserialize, Serialize};

/// Above this `ln W` the count `W = K^n` is kept in log space only.
pub const LOG_SPACE_THRESHOLD: f64 = 700.0;

fn check_k(k: f64) -> Result<()> {
    if k >= 1.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Schmidt number must be finite and >= 1, got {k}")))
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("symbol count must be positive".into()))
    } else {
        Ok(())
    }
}

/// `P(n) = K^-n`.
pub fn coincidence_probability(k: f64, n: u64) -> Result<f64> {
    check_k(k)?;
    check_n(n)?;
    Ok((-(n as f64) * k.ln()).exp())
}

/// `n log K` in the requested base.
pub fn schmidt_information(k: f64, n: u64, base: LogBase) -> Result<f64> {
    check_k(k)?;
    check_n(n)?;
    Ok(n as f64 * base.log(k))
}

/// Effective number of equally probable microstates `W = K^n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Microstates {
    pub ln_w: f64,
    /// True when `W` exceeds double range and only `ln_w` is meaningful.
    pub log_space: bool,
}

impl Microstates {
    /// `W` itself, or `None` in log space.
    pub fn value(&self) -> Option<f64> {
        (!self.log_space).then(|| self.ln_w.exp())
    }
}

pub fn effective_microstates(k: f64, n: u64) -> Result<Microstates> {
    let ln_w = schmidt_information(k, n, LogBase::E)?;
    Ok(Microstates { ln_w, log_space: ln_w > LOG_SPACE_THRESHOLD })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    pub schmidt_number: f64,
    pub n_symbols: u64,
    pub i_bits: f64,
    pub i_nats: f64,
    pub microstates: Microstates,
    pub p_coincidence: f64,
}

impl InfoReport {
    pub fn new(k: f64, n_symbols: u64) -> Result<Self> {
        let i_nats = schmidt_information(k, n_symbols, LogBase::E)?;
        Ok(Self {
            schmidt_number: k,
            n_symbols,
            i_bits: schmidt_information(k, n_symbols, LogBase::Two)?,
            i_nats,
            microstates: effective_microstates(k, n_symbols)?,
            p_coincidence: coincidence_probability(k, n_symbols)?,
        })
    }
}
