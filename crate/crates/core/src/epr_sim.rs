//! Monte Carlo check of the accidental-coincidence probability.
//!
//! Two independent sources emit symbols with probabilities equal to the
//! Schmidt weights. A trial draws `n` symbols from each and counts a hit when
//! the strings agree at every position; the hit rate estimates `K^-n`.
//!
//! Randomness comes from ChaCha8 seeded with the user seed. Trials are split
//! into fixed blocks of [`TRIALS_PER_BLOCK`]; block `b` uses ChaCha stream `b`,
//! so reports depend only on the inputs and never on thread count.

use crate::schmidt::schmidt_number;
use crate::{Error, Execution, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const TRIALS_PER_BLOCK: u64 = 1 << 14;

/// Tail mass below which an infinite spectrum is cut when sampling.
pub const SPECTRUM_TAIL: f64 = 1e-12;

/// Inverse-CDF sampler over a finite distribution.
#[derive(Clone, Debug)]
pub struct Categorical {
    cdf: Vec<f64>,
}

impl Categorical {
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty weight list".into()));
        }
        let mut cdf = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for (k, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDistribution(format!("weight {k} = {w} is negative or not finite")));
            }
            acc += w;
            cdf.push(acc);
        }
        if (acc - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!("weights sum to {acc}, expected 1")));
        }
        for c in &mut cdf {
            *c /= acc;
        }
        // The top symbol must absorb every u < 1.
        *cdf.last_mut().expect("non-empty") = f64::INFINITY;
        Ok(Self { cdf })
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    /// First index whose cumulative weight exceeds a uniform draw in [0, 1).
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c <= u)
    }
}

/// `n` independent symbol indices drawn from `weights`.
pub fn sample_stream(weights: &[f64], n: usize, seed: u64) -> Result<Vec<usize>> {
    let dist = Categorical::new(weights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceReport {
    pub n_symbols: usize,
    pub trials: u64,
    /// Trials in which all `n_symbols` positions matched.
    pub hits: u64,
    pub p_hat: f64,
    pub p_theory: f64,
    pub std_err: f64,
    pub seed: u64,
    /// Matching positions summed over all trials.
    pub position_hits: u64,
    /// `match_histogram[j]` counts trials with exactly `j` matching positions.
    pub match_histogram: Vec<u64>,
}

impl CoincidenceReport {
    /// Single-position match rate, an estimate of `sum(lambda^2) = 1/K`.
    pub fn position_rate(&self) -> f64 {
        self.position_hits as f64 / (self.trials as f64 * self.n_symbols as f64)
    }

    pub fn position_std_err(&self) -> f64 {
        let p = self.position_rate();
        (p * (1.0 - p) / (self.trials as f64 * self.n_symbols as f64)).sqrt()
    }
}

pub fn run_coincidence_experiment(weights: &[f64], n: usize, trials: u64, seed: u64) -> Result<CoincidenceReport> {
    run_coincidence_experiment_with(weights, n, trials, seed, Execution::default())
}

pub fn run_coincidence_experiment_with(
    weights: &[f64],
    n: usize,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<CoincidenceReport> {
    if n == 0 {
        return Err(Error::Domain("symbol count must be positive".into()));
    }
    if trials == 0 {
        return Err(Error::Domain("trial count must be positive".into()));
    }
    let dist = Categorical::new(weights)?;
    let k = schmidt_number(weights)?;

    let blocks = trials.div_ceil(TRIALS_PER_BLOCK);
    let per_block = exec.map_indexed(blocks as usize, |b| {
        let b = b as u64;
        let start = b * TRIALS_PER_BLOCK;
        let count = TRIALS_PER_BLOCK.min(trials - start);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b);
        let mut histogram = vec![0u64; n + 1];
        let mut alice = vec![0usize; n];
        for _ in 0..count {
            for a in alice.iter_mut() {
                *a = dist.sample(&mut rng);
            }
            let mut matches = 0;
            for &a in &alice {
                if dist.sample(&mut rng) == a {
                    matches += 1;
                }
            }
            histogram[matches] += 1;
        }
        histogram
    });

    let mut match_histogram = vec![0u64; n + 1];
    for h in per_block {
        for (acc, v) in match_histogram.iter_mut().zip(h) {
            *acc += v;
        }
    }
    let hits = match_histogram[n];
    let position_hits = match_histogram.iter().enumerate().map(|(j, c)| j as u64 * c).sum();
    let p_hat = hits as f64 / trials as f64;
    Ok(CoincidenceReport {
        n_symbols: n,
        trials,
        hits,
        p_hat,
        p_theory: (-(n as f64) * k.ln()).exp(),
        std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        seed,
        position_hits,
        match_histogram,
    })
}
