//! Closed-form Schmidt decomposition of the bivariate normal amplitude.
//!
//! For `psi(x1, x2) = sqrt(p(x1, x2))` with `p` the bivariate normal density,
//! the Schmidt weights form a geometric progression
//! `lambda_k = lambda0 * q^k` with `lambda0 = 2/(K+1)`, `q = (K-1)/(K+1)` and
//! `K = 1/sqrt(1 - rho^2)`, and the modes are Hermite functions whose width
//! shrinks by `sqrt(K)` relative to the marginal standard deviation.

use crate::{Error, LogBase, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Mode sums stop once the weight drops below this value.
pub const SERIES_WEIGHT_CUTOFF: f64 = 1e-15;
/// Hard cap on the number of terms in any infinite mode sum.
pub const SERIES_MAX_TERMS: usize = 512;

/// Parameters of the bivariate normal density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    m1: f64,
    m2: f64,
    sigma1: f64,
    sigma2: f64,
    rho: f64,
}

impl GaussianParams {
    pub fn new(m1: f64, m2: f64, sigma1: f64, sigma2: f64, rho: f64) -> Result<Self> {
        if !(m1.is_finite() && m2.is_finite()) {
            return Err(Error::Domain("means must be finite".into()));
        }
        if !(sigma1 > 0.0 && sigma1.is_finite() && sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Domain(format!(
                "standard deviations must be positive and finite, got sigma1 = {sigma1}, sigma2 = {sigma2}"
            )));
        }
        if !(rho.abs() < 1.0) {
            return Err(Error::Domain(format!("correlation must satisfy |rho| < 1, got {rho}")));
        }
        Ok(Self { m1, m2, sigma1, sigma2, rho })
    }

    /// Zero means, unit variances.
    pub fn standard(rho: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 1.0, 1.0, rho)
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }
    pub fn m2(&self) -> f64 {
        self.m2
    }
    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn schmidt_number(&self) -> f64 {
        // |rho| < 1 is a type invariant.
        1.0 / (1.0 - self.rho * self.rho).sqrt()
    }

    pub fn spectrum(&self) -> GeometricSpectrum {
        GeometricSpectrum::from_schmidt_number(self.schmidt_number()).expect("K >= 1 for valid parameters")
    }

    pub fn density(&self, x1: f64, x2: f64) -> f64 {
        density(self, x1, x2)
    }

    pub fn wavefunction(&self, x1: f64, x2: f64) -> f64 {
        wavefunction(self, x1, x2)
    }
}

/// Bivariate normal probability density.
pub fn density(params: &GaussianParams, x1: f64, x2: f64) -> f64 {
    let u = (x1 - params.m1) / params.sigma1;
    let v = (x2 - params.m2) / params.sigma2;
    let one_minus_r2 = 1.0 - params.rho * params.rho;
    let quad = (u * u - 2.0 * params.rho * u * v + v * v) / (2.0 * one_minus_r2);
    (-quad).exp() / (2.0 * PI * params.sigma1 * params.sigma2 * one_minus_r2.sqrt())
}

/// Real amplitude `sqrt(density)`.
pub fn wavefunction(params: &GaussianParams, x1: f64, x2: f64) -> f64 {
    density(params, x1, x2).sqrt()
}

/// `K = 1/sqrt(1 - rho^2)`.
pub fn schmidt_number_from_rho(rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::Domain(format!("Schmidt number is infinite for |rho| >= 1 (rho = {rho})")));
    }
    Ok(1.0 / (1.0 - rho * rho).sqrt())
}

/// `rho^2 = 1 - 1/K^2`, the Schmidt correlation coefficient.
pub fn rho_squared_from_k(k: f64) -> Result<f64> {
    check_schmidt_number(k)?;
    Ok(1.0 - 1.0 / (k * k))
}

fn check_schmidt_number(k: f64) -> Result<()> {
    if k >= 1.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Schmidt number must be finite and >= 1, got {k}")))
    }
}

/// Geometric Schmidt spectrum of a Gaussian state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricSpectrum {
    k: f64,
    lambda0: f64,
    q: f64,
}

impl GeometricSpectrum {
    pub fn from_schmidt_number(k: f64) -> Result<Self> {
        check_schmidt_number(k)?;
        // At K = 1 the ratio is exactly zero: a single mode.
        let q = if k == 1.0 { 0.0 } else { (k - 1.0) / (k + 1.0) };
        Ok(Self { k, lambda0: 2.0 / (k + 1.0), q })
    }

    pub fn from_rho(rho: f64) -> Result<Self> {
        Self::from_schmidt_number(schmidt_number_from_rho(rho)?)
    }

    pub fn schmidt_number(&self) -> f64 {
        self.k
    }

    /// Principal weight `lambda0 = 2/(K+1)`.
    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    /// Progression ratio `q = (K-1)/(K+1)`.
    pub fn ratio(&self) -> f64 {
        self.q
    }

    pub fn weight(&self, index: usize) -> f64 {
        if index == 0 {
            self.lambda0
        } else {
            self.lambda0 * self.q.powi(index as i32)
        }
    }

    /// The first `count` weights, built by repeated multiplication.
    pub fn weights(&self, count: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(count);
        let mut w = self.lambda0;
        for _ in 0..count {
            out.push(w);
            w *= self.q;
        }
        out
    }

    /// Weights up to the series cutoff (`lambda_k < 1e-15` or 512 terms).
    pub fn series_weights(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut w = self.lambda0;
        while out.len() < SERIES_MAX_TERMS && w >= SERIES_WEIGHT_CUTOFF {
            out.push(w);
            w *= self.q;
        }
        out
    }

    /// Finite distribution holding at least `1 - tail` of the mass; the
    /// remaining tail is folded into the last symbol so the weights sum to 1.
    pub fn truncated(&self, tail: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut cum = 0.0;
        let mut w = self.lambda0;
        while cum < 1.0 - tail && w > 0.0 {
            out.push(w);
            cum += w;
            w *= self.q;
        }
        let rest = 1.0 - out.iter().sum::<f64>();
        if let Some(last) = out.last_mut() {
            *last += rest.max(0.0);
        }
        out
    }
}

/// `[lambda0, lambda0*q, ...]` of length `count`.
pub fn analytic_weights(k: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Domain("weight count must be positive".into()));
    }
    Ok(GeometricSpectrum::from_schmidt_number(k)?.weights(count))
}

/// Physicists' Hermite polynomial `H_k(u)` by the plain three-term recurrence.
///
/// Overflows for large `k` and `|u|`; mode evaluation uses
/// [`hermite_function`] instead.
pub fn hermite_polynomial(k: usize, u: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 2.0 * u;
    for j in 1..k {
        let next = 2.0 * u * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Hermite function
/// `H_k(y) exp(-y^2/2) / sqrt(2^k k! sqrt(pi))`.
///
/// Runs the normalized recurrence without the Gaussian factor and folds
/// periodic rescalings into a log-scale, so neither the polynomial growth nor
/// the Gaussian decay leaves double range before the final product.
pub fn hermite_function(k: usize, y: f64) -> f64 {
    const RESCALE_ABOVE: f64 = 1e150;
    let mut log_scale = 0.0f64;
    let mut prev = PI.powf(-0.25);
    if k == 0 {
        return prev * (-0.5 * y * y).exp();
    }
    let mut cur = std::f64::consts::SQRT_2 * y * prev;
    for j in 1..k {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * y * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            log_scale += RESCALE_ABOVE.ln();
        }
    }
    if cur == 0.0 {
        return 0.0;
    }
    cur.signum() * (cur.abs().ln() + log_scale - 0.5 * y * y).exp()
}

/// Normalization constant of the analytic Schmidt mode,
/// `C_k = [sigma sqrt(2/K) 2^k k! sqrt(pi)]^(-1/2)`.
///
/// Evaluated in log space; underflows to 0 for very large `k`.
pub fn mode_normalization(k: usize, sigma: f64, schmidt_k: f64) -> f64 {
    let ln_fact: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
    let ln_c =
        -0.5 * ((sigma * (2.0 / schmidt_k).sqrt()).ln() + k as f64 * std::f64::consts::LN_2 + ln_fact + 0.5 * PI.ln());
    ln_c.exp()
}

/// Analytic Schmidt mode
/// `C_k H_k((x-m)/sigma * sqrt(K/2)) exp(-K (x-m)^2 / (4 sigma^2))`,
/// normalized to unit L2 norm on the real line.
pub fn analytic_mode(k: usize, m: f64, sigma: f64, schmidt_k: f64, x: f64) -> f64 {
    let scale = (schmidt_k / 2.0).sqrt() / sigma;
    let y = (x - m) * scale;
    scale.sqrt() * hermite_function(k, y)
}

/// Entropy of entanglement of the geometric spectrum,
/// `log((K+1)/2) + (K-1)/2 * log((K+1)/(K-1))`, with `S(1) = 0`.
pub fn closed_form_entropy(k: f64, base: LogBase) -> Result<f64> {
    check_schmidt_number(k)?;
    if k == 1.0 {
        return Ok(0.0);
    }
    let nats = ((k + 1.0) / 2.0).ln() + 0.5 * (k - 1.0) * (2.0 / (k - 1.0)).ln_1p();
    Ok(base.from_nats(nats))
}

/// Mutual information of the bivariate normal, `log K = -log(1 - rho^2)/2`.
pub fn shannon_mi_gaussian(rho: f64, base: LogBase) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::Domain(format!("|rho| must be < 1, got {rho}")));
    }
    Ok(base.from_nats(-0.5 * (-rho * rho).ln_1p()))
}

/// Truncated Schmidt sum `sum_k sqrt(lambda_k) psi_k^(1)(x1) psi_k^(2)(x2)`.
///
/// Stops when `sqrt(lambda_k) < 1e-12` or after 512 terms. Negative
/// correlation pairs the modes with alternating sign `sign(rho)^k`.
pub fn schmidt_series(params: &GaussianParams, x1: f64, x2: f64) -> f64 {
    let spectrum = params.spectrum();
    let k = spectrum.schmidt_number();
    let sign = if params.rho < 0.0 { -1.0 } else { 1.0 };
    let mut total = 0.0;
    let mut pair_sign = 1.0;
    for index in 0..SERIES_MAX_TERMS {
        let amp = spectrum.weight(index).sqrt();
        if amp < 1e-12 {
            break;
        }
        let a = analytic_mode(index, params.m1, params.sigma1, k, x1);
        let b = analytic_mode(index, params.m2, params.sigma2, k, x2);
        total += pair_sign * amp * a * b;
        pair_sign *= sign;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const TABLE_K: f64 = 2.29415733870562;

    fn section3() -> GaussianParams {
        GaussianParams::new(1.0, -1.0, 2.0, 1.0, 0.9).unwrap()
    }

    /// Composite Simpson on [a, b] with `n` (even) panels.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    /// Adaptive Simpson with Richardson correction.
    fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, depth)
    }

    #[test]
    fn density_examples() {
        let std = GaussianParams::standard(0.0).unwrap();
        assert_relative_eq!(density(&std, 0.0, 0.0), 1.0 / (2.0 * PI), max_relative = 1e-15);
        let expected = 1.0 / (2.0 * PI * 2.0 * 1.0 * 0.19f64.sqrt());
        assert_relative_eq!(section3().density(1.0, -1.0), expected, max_relative = 1e-15);
        assert_relative_eq!(
            section3().wavefunction(1.0, -1.0),
            (1.0 / (4.0 * PI * 0.19f64.sqrt())).sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(std.wavefunction(0.0, 0.0), (1.0 / (2.0 * PI)).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(GaussianParams::new(0.0, 0.0, 0.0, 1.0, 0.1).is_err());
        assert!(GaussianParams::new(0.0, 0.0, 1.0, -1.0, 0.1).is_err());
        assert!(GaussianParams::new(0.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(GaussianParams::new(0.0, 0.0, 1.0, 1.0, -1.0).is_err());
        assert!(GaussianParams::new(0.0, 0.0, 1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn density_integrates_to_one_with_univariate_marginals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = GaussianParams::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.3..3.0),
                rng.random_range(0.3..3.0),
                rng.random_range(-0.95..0.95),
            )
            .unwrap();
            let (a1, b1) = (p.m1 - 8.0 * p.sigma1, p.m1 + 8.0 * p.sigma1);
            let (a2, b2) = (p.m2 - 8.0 * p.sigma2, p.m2 + 8.0 * p.sigma2);
            let marginal1 = |x1: f64| simpson(|x2| p.density(x1, x2), a2, b2, 800);
            let total = simpson(marginal1, a1, b1, 800);
            assert!((total - 1.0).abs() <= 1e-8, "total = {total}");
            for &x1 in &[p.m1 - p.sigma1, p.m1, p.m1 + 2.5 * p.sigma1] {
                let z = (x1 - p.m1) / p.sigma1;
                let normal = (-0.5 * z * z).exp() / (p.sigma1 * (2.0 * PI).sqrt());
                assert!((marginal1(x1) - normal).abs() <= 1e-8);
            }
            for &x2 in &[p.m2 - 1.5 * p.sigma2, p.m2 + 0.3 * p.sigma2] {
                let z = (x2 - p.m2) / p.sigma2;
                let normal = (-0.5 * z * z).exp() / (p.sigma2 * (2.0 * PI).sqrt());
                let m2 = simpson(|x1| p.density(x1, x2), a1, b1, 800);
                assert!((m2 - normal).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn schmidt_number_examples() {
        assert_eq!(schmidt_number_from_rho(0.0).unwrap(), 1.0);
        assert!((schmidt_number_from_rho(0.9).unwrap() - TABLE_K).abs() < 1e-13);
        assert_eq!(schmidt_number_from_rho(-0.9).unwrap(), schmidt_number_from_rho(0.9).unwrap());
        assert!(matches!(schmidt_number_from_rho(1.0), Err(Error::Domain(_))));
        assert!(schmidt_number_from_rho(-1.5).is_err());
    }

    #[test]
    fn rho_squared_examples() {
        assert_eq!(rho_squared_from_k(1.0).unwrap(), 0.0);
        let k = schmidt_number_from_rho(0.9).unwrap();
        assert!((rho_squared_from_k(k).unwrap() - 0.81).abs() < 1e-14);
        assert!(rho_squared_from_k(0.5).is_err());
        let mut last = 0.0;
        for i in 1..200 {
            let r2 = rho_squared_from_k(1.0 + i as f64 * 0.5).unwrap();
            assert!(r2 > last && r2 < 1.0);
            last = r2;
        }
    }

    #[test]
    fn analytic_weights_examples() {
        let k = schmidt_number_from_rho(0.9).unwrap();
        let w = analytic_weights(k, 3).unwrap();
        let table = [0.607135541614981, 0.238521975722865, 0.0937068068052879];
        for (a, b) in w.iter().zip(table) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(analytic_weights(1.0, 4).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        let many = analytic_weights(k, 200).unwrap();
        assert!((many.iter().sum::<f64>() - 1.0).abs() <= 1e-15);
        assert!(many.windows(2).all(|p| p[1] < p[0]));
        assert!(analytic_weights(k, 0).is_err());
    }

    #[test]
    fn truncated_weights_identity() {
        // sum of the first `count` terms equals 1 - q^count
        for &k in &[1.0, 1.3, TABLE_K, 7.5, 40.0] {
            let s = GeometricSpectrum::from_schmidt_number(k).unwrap();
            for count in [1usize, 2, 5, 17, 60] {
                let sum: f64 = s.weights(count).iter().sum();
                let expected = 1.0 - s.ratio().powi(count as i32) * s.lambda0() / (1.0 - s.ratio());
                assert!((sum - expected).abs() < 1e-14, "k={k} count={count}");
            }
        }
    }

    #[test]
    fn geometric_truncation_folds_tail() {
        let s = GeometricSpectrum::from_rho(0.9).unwrap();
        let w = s.truncated(1e-12);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let head: f64 = w[..w.len() - 1].iter().sum();
        assert!(head < 1.0 - 1e-12);
        assert_eq!(GeometricSpectrum::from_schmidt_number(1.0).unwrap().truncated(1e-12), vec![1.0]);
    }

    #[test]
    fn hermite_function_matches_polynomial_for_small_k() {
        let mut fact = 1.0f64;
        for k in 0..20usize {
            if k > 0 {
                fact *= k as f64;
            }
            let norm = (2f64.powi(k as i32) * fact * PI.sqrt()).sqrt();
            for &y in &[-3.1, -0.7, 0.0, 0.4, 2.2] {
                let direct = hermite_polynomial(k, y) * (-0.5 * y * y).exp() / norm;
                let scaled = hermite_function(k, y);
                assert!((direct - scaled).abs() <= 1e-12 * (1.0 + direct.abs()), "k={k} y={y}");
            }
        }
    }

    #[test]
    fn hermite_function_stays_finite_at_high_order() {
        // The raw polynomial overflows here.
        assert!(!hermite_polynomial(300, 25.0).is_finite());
        for k in [150usize, 300, 511] {
            for &y in &[0.3, 10.0, 25.0, 31.0, 40.0] {
                let v = hermite_function(k, y);
                assert!(v.is_finite() && v.abs() < 1.0, "k={k} y={y} v={v}");
            }
        }
        // Orthonormal functions have unit norm even at high order.
        let norm = simpson(|y| hermite_function(300, y).powi(2), -40.0, 40.0, 40_000);
        assert!((norm - 1.0).abs() < 1e-9, "norm = {norm}");
    }

    #[test]
    fn mode_constant_closed_form() {
        // C_0 = (K / (2 pi sigma^2))^(1/4)
        for &(sigma, k) in &[(1.0, 1.0), (2.0, TABLE_K), (0.5, 9.0)] {
            let c0 = mode_normalization(0, sigma, k);
            assert_relative_eq!(c0, (k / (2.0 * PI * sigma * sigma)).powf(0.25), max_relative = 1e-14);
            let m = 0.7;
            let x = 1.9;
            let u = (x - m) / sigma * (k / 2.0).sqrt();
            for idx in 0..8 {
                let direct = mode_normalization(idx, sigma, k)
                    * hermite_polynomial(idx, u)
                    * (-k * (x - m) * (x - m) / (4.0 * sigma * sigma)).exp();
                assert_relative_eq!(analytic_mode(idx, m, sigma, k, x), direct, max_relative = 1e-12, epsilon = 1e-300);
            }
        }
        assert_relative_eq!(analytic_mode(0, 0.0, 1.0, 1.0, 0.0), (2.0 * PI).powf(-0.25), max_relative = 1e-15);
    }

    #[test]
    fn ground_mode_has_unit_norm_by_adaptive_quadrature() {
        for &(m, sigma, k) in &[(1.0, 2.0, TABLE_K), (-1.0, 1.0, TABLE_K), (0.0, 1.0, 1.0), (3.0, 0.2, 30.0)] {
            let f = |x: f64| analytic_mode(0, m, sigma, k, x).powi(2);
            let norm = adaptive_simpson(&f, m - 12.0 * sigma, m + 12.0 * sigma, 1e-13, 40);
            assert!((norm - 1.0).abs() < 1e-11, "norm = {norm}");
        }
    }

    #[test]
    fn analytic_modes_orthonormal() {
        let (m, sigma) = (1.0, 2.0);
        let k = TABLE_K;
        for i in 0..=6 {
            for j in i..=6 {
                let ip = simpson(
                    |x| analytic_mode(i, m, sigma, k, x) * analytic_mode(j, m, sigma, k, x),
                    m - 10.0 * sigma,
                    m + 10.0 * sigma,
                    4000,
                );
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() <= 1e-10, "<{i},{j}> = {ip}");
            }
        }
    }

    #[test]
    fn closed_form_entropy_matches_series() {
        assert_eq!(closed_form_entropy(1.0, LogBase::E).unwrap(), 0.0);
        let series = |k: f64| -> f64 {
            let s = GeometricSpectrum::from_schmidt_number(k).unwrap();
            let mut total = 0.0;
            let mut w = s.lambda0();
            while w >= 1e-18 {
                total -= w * w.ln();
                w *= s.ratio();
            }
            total
        };
        let s = closed_form_entropy(TABLE_K, LogBase::E).unwrap();
        assert!((s - series(TABLE_K)).abs() < 1e-12);
        assert_relative_eq!(
            closed_form_entropy(TABLE_K, LogBase::Two).unwrap(),
            s / std::f64::consts::LN_2,
            max_relative = 1e-15
        );
        let values: Vec<f64> =
            (0..100).map(|i| closed_form_entropy(1.0 + 49.0 * i as f64 / 99.0, LogBase::E).unwrap()).collect();
        assert!(values.windows(2).all(|p| p[1] > p[0]));
        assert!(closed_form_entropy(0.99, LogBase::E).is_err());
    }

    #[test]
    fn gaussian_mi_examples() {
        assert_eq!(shannon_mi_gaussian(0.0, LogBase::E).unwrap(), 0.0);
        assert!((shannon_mi_gaussian(0.9, LogBase::E).unwrap() - TABLE_K.ln()).abs() < 1e-13);
        for i in 0..50 {
            let rho = -0.98 + 1.96 * i as f64 / 49.0;
            assert_eq!(
                shannon_mi_gaussian(rho, LogBase::Two).unwrap(),
                shannon_mi_gaussian(-rho, LogBase::Two).unwrap()
            );
        }
        assert!(shannon_mi_gaussian(1.0, LogBase::E).is_err());
    }

    #[test]
    fn schmidt_series_reproduces_wavefunction_for_both_signs() {
        for rho in [0.9, -0.6, 0.0, 0.3] {
            let p = GaussianParams::new(0.5, -0.2, 1.5, 0.8, rho).unwrap();
            for &(x1, x2) in &[(0.5, -0.2), (1.7, 0.3), (-1.0, -1.1), (2.5, -0.9)] {
                let direct = p.wavefunction(x1, x2);
                let series = schmidt_series(&p, x1, x2);
                assert!((direct - series).abs() < 1e-8, "rho={rho} ({x1},{x2}): {direct} vs {series}");
            }
        }
    }

    proptest! {
        #[test]
        fn rho_round_trip(rho in -0.999f64..0.999) {
            let k = schmidt_number_from_rho(rho).unwrap();
            prop_assert!((rho_squared_from_k(k).unwrap() - rho * rho).abs() <= 1e-14);
        }

        #[test]
        fn wavefunction_squares_to_density(
            rho in -0.99f64..0.99,
            x1 in -5.0f64..5.0,
            x2 in -5.0f64..5.0,
        ) {
            let p = GaussianParams::new(0.3, -0.4, 1.2, 0.7, rho).unwrap();
            let d = p.density(x1, x2);
            prop_assert!(d >= 0.0);
            let w = p.wavefunction(x1, x2);
            if d > 0.0 {
                prop_assert!(((w * w - d) / d).abs() <= 1e-14);
            }
        }
    }
}
