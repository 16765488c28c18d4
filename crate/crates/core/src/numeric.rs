use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Logarithm base for entropies and information measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    /// Bits.
    #[serde(rename = "2")]
    Two,
    /// Nats.
    #[default]
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    /// Converts a value measured in nats into this base.
    #[inline]
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::E => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }

    #[inline]
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::E => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Two => f.write_str("2"),
            LogBase::E => f.write_str("e"),
        }
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(format!("unsupported log base {other:?}, expected 2 or e")),
        }
    }
}

/// Compensated (Neumaier) summation in iteration order.
///
/// The result depends only on the order of the items, so sums over grid rows
/// are reproducible regardless of how the rows were produced.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
