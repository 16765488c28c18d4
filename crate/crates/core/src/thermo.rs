//! Thermal-oscillator reading of the geometric Schmidt spectrum.
//!
//! Identifying the progression ratio with a Boltzmann factor,
//! `exp(-beta) = (K-1)/(K+1)` where `beta = hbar*omega/theta`, maps every
//! Gaussian Schmidt number to a temperature. Only the ratio `beta` is
//! represented.

use crate::{Error, LogBase, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ThermoPoint {
    beta: f64,
}

impl ThermoPoint {
    pub fn new(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta })
    }

    pub fn from_schmidt_number(k: f64) -> Result<Self> {
        Ok(Self { beta: beta_from_k(k)? })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn schmidt_number(&self) -> f64 {
        k_from_beta(self.beta).expect("beta > 0")
    }

    pub fn rho_squared(&self) -> f64 {
        rho_squared_from_beta(self.beta).expect("beta > 0")
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        oscillator_entropy(self.beta, base).expect("beta > 0")
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && !beta.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("beta must be positive, got {beta}")))
    }
}

/// `beta = ln((K+1)/(K-1))`.
pub fn beta_from_k(k: f64) -> Result<f64> {
    if !(k > 1.0) || k.is_nan() {
        return Err(Error::Domain(format!("beta is infinite for K <= 1 (K = {k})")));
    }
    Ok((2.0 / (k - 1.0)).ln_1p())
}

/// `K = coth(beta/2) = 1 + 2/(e^beta - 1)`.
pub fn k_from_beta(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(1.0 + 2.0 / beta.exp_m1())
}

/// `rho^2 = 1/cosh^2(beta/2)`.
pub fn rho_squared_from_beta(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let c = (0.5 * beta).cosh();
    Ok(1.0 / (c * c))
}

/// Entropy of a harmonic oscillator at `beta = hbar*omega/theta`,
/// `-log(1 - e^-beta) + beta/(e^beta - 1)`.
pub fn oscillator_entropy(beta: f64, base: LogBase) -> Result<f64> {
    check_beta(beta)?;
    let first = if beta < 1.0 { -(-(-beta).exp_m1()).ln() } else { -(-(-beta).exp()).ln_1p() };
    let second = if beta.is_infinite() { 0.0 } else { beta / beta.exp_m1() };
    Ok(base.from_nats(first + second))
}
