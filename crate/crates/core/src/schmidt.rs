//! Schmidt spectrum of a discretized state via dense SVD.
//!
//! For an amplitude matrix `A = U S V^T`, the Schmidt weights are the squared
//! singular values and the mode vectors are the columns of `U` and `V`.
//! Columns of `U` are scaled by `sqrt(delta1)` relative to the continuous
//! modes, columns of `V` by `sqrt(delta2)`.

use crate::discretize::{DiscretizedState, GridSpec};
use crate::svd::jacobi_svd;
use crate::{Error, LogBase, Result};
use nalgebra::DMatrix;

/// Weights in `[-NEGATIVE_WEIGHT_TOLERANCE, 0)` are clamped to zero.
pub const NEGATIVE_WEIGHT_TOLERANCE: f64 = 1e-14;
/// Allowed deviation of `sum(weights)` from 1 for spectrum statistics.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    weights: Vec<f64>,
    modes1: DMatrix<f64>,
    modes2: DMatrix<f64>,
    grid: GridSpec,
}

impl SchmidtSpectrum {
    /// Weights sorted non-increasing.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Column `k` samples mode `k` of subsystem 1 on the axis-1 midpoints.
    pub fn modes1(&self) -> &DMatrix<f64> {
        &self.modes1
    }

    pub fn modes2(&self) -> &DMatrix<f64> {
        &self.modes2
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn schmidt_number(&self) -> f64 {
        schmidt_number(&self.weights).expect("decomposed weights are a distribution")
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        entanglement_entropy(&self.weights, base).expect("decomposed weights are a distribution")
    }

    /// Mode `k` of subsystem 1 in function units (divided by `sqrt(delta1)`).
    pub fn mode1_values(&self, k: usize) -> Vec<f64> {
        let s = self.grid.delta1().sqrt();
        self.modes1.column(k).iter().map(|v| v / s).collect()
    }

    pub fn mode2_values(&self, k: usize) -> Vec<f64> {
        let s = self.grid.delta2().sqrt();
        self.modes2.column(k).iter().map(|v| v / s).collect()
    }
}

/// Schmidt decomposition of a normalized state.
///
/// All `min(n1, n2)` modes are kept. The largest-magnitude entry of each
/// `modes1` column is made positive; the paired `modes2` column is flipped
/// with it so that every product term is unchanged.
pub fn decompose(state: &DiscretizedState) -> Result<SchmidtSpectrum> {
    let (rows, cols) = state.amplitudes().shape();
    let svd = jacobi_svd(state.amplitudes())?;
    let rank = svd.singular_values.len();

    let mut weights = Vec::with_capacity(rank);
    let mut modes1 = DMatrix::zeros(rows, rank);
    let mut modes2 = DMatrix::zeros(cols, rank);
    for k in 0..rank {
        let s = svd.singular_values[k];
        weights.push(s * s);
        let col = svd.u.column(k);
        let pivot = col.iter().fold(0.0f64, |best, &x| if x.abs() > best.abs() { x } else { best });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        modes1.set_column(k, &(col * sign));
        modes2.set_column(k, &(svd.v.column(k) * sign));
    }

    Ok(SchmidtSpectrum { weights, modes1, modes2, grid: *state.grid() })
}

/// Validates a weight list, clamping tiny negatives to zero.
fn clean_weights(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::InvalidDistribution("empty weight list".into()));
    }
    let mut out = Vec::with_capacity(weights.len());
    for (k, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < -NEGATIVE_WEIGHT_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("weight {k} = {w} is negative or not finite")));
        }
        out.push(w.max(0.0));
    }
    let total: f64 = out.iter().sum();
    if total == 0.0 {
        return Err(Error::InvalidDistribution("all weights are zero".into()));
    }
    if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("weights sum to {total}, expected 1")));
    }
    Ok(out)
}

/// Schmidt number `K = 1 / sum(lambda_k^2)`.
pub fn schmidt_number(weights: &[f64]) -> Result<f64> {
    let w = clean_weights(weights)?;
    Ok(1.0 / w.iter().map(|x| x * x).sum::<f64>())
}

/// Entanglement entropy `-sum(lambda_k log lambda_k)`, with `0 log 0 = 0`.
pub fn entanglement_entropy(weights: &[f64], base: LogBase) -> Result<f64> {
    let w = clean_weights(weights)?;
    let nats: f64 = w.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum();
    Ok(base.from_nats(nats.max(0.0)))
}

/// Truncated synthesis `sum_{k<rank} sqrt(lambda_k) modes1_k (x) modes2_k`.
pub fn reconstruct(spectrum: &SchmidtSpectrum, rank: usize) -> Result<DiscretizedState> {
    if rank == 0 || rank > spectrum.len() {
        return Err(Error::RankOutOfRange { requested: rank, available: spectrum.len() });
    }
    let u = spectrum.modes1.columns(0, rank);
    let v = spectrum.modes2.columns(0, rank);
    let s = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        rank,
        spectrum.weights[..rank].iter().map(|w| w.sqrt()),
    ));
    let m = u * s * v.transpose();
    DiscretizedState::unnormalized(spectrum.grid, m)
}

/// Frobenius norm of the difference of two amplitude matrices.
pub fn residual_norm(a: &DiscretizedState, b: &DiscretizedState) -> f64 {
    (a.amplitudes() - b.amplitudes()).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{build_grid, sample_state, GridSpec};
    use crate::gaussian_model::{analytic_mode, analytic_weights, GaussianParams};
    use proptest::prelude::*;

    const TABLE_K: f64 = 2.29415733870562;

    fn section3() -> GaussianParams {
        GaussianParams::new(1.0, -1.0, 2.0, 1.0, 0.9).unwrap()
    }

    fn gaussian_state(p: &GaussianParams, n: usize) -> DiscretizedState {
        let g = build_grid(p, n, crate::discretize::DEFAULT_SPAN).unwrap();
        sample_state(|x, y| p.wavefunction(x, y), &g).unwrap()
    }

    #[test]
    fn rank_one_state_has_single_mode() {
        let g = GridSpec::new(10, 7, 0.0, 1.0, 0.0, 1.0).unwrap();
        let s = sample_state(|a, b| (a + 0.3) * (2.0 - b * b), &g).unwrap();
        let spectrum = decompose(&s).unwrap();
        assert!((spectrum.weights()[0] - 1.0).abs() < 1e-14);
        assert!(spectrum.weights()[1..].iter().all(|w| *w < 1e-28));
        assert!((spectrum.schmidt_number() - 1.0).abs() < 1e-12);
        let r = reconstruct(&spectrum, 1).unwrap();
        assert!(residual_norm(&s, &r) < 1e-14);
    }

    #[test]
    fn uniform_two_by_two() {
        let g = GridSpec::new(2, 2, 0.0, 1.0, 0.0, 1.0).unwrap();
        let s = DiscretizedState::normalized(g, DMatrix::from_element(2, 2, 0.5)).unwrap();
        let spectrum = decompose(&s).unwrap();
        assert!((spectrum.weights()[0] - 1.0).abs() < 1e-15);
        assert!(spectrum.weights()[1].abs() < 1e-15);
        let h = 0.5f64.sqrt();
        for v in spectrum.modes1().column(0).iter().chain(spectrum.modes2().column(0).iter()) {
            assert!((v - h).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_weights_match_closed_form() {
        let spectrum = decompose(&gaussian_state(&section3(), 100)).unwrap();
        let theory = analytic_weights(TABLE_K, 6).unwrap();
        for (k, (a, b)) in spectrum.weights().iter().zip(&theory).enumerate() {
            assert!((a - b).abs() < 1e-6, "k={k}: {a} vs {b}");
        }
        assert!((spectrum.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((spectrum.schmidt_number() - TABLE_K).abs() < 1e-6);
        let q = (TABLE_K - 1.0) / (TABLE_K + 1.0);
        for k in 0..4 {
            assert!((spectrum.weights()[k + 1] / spectrum.weights()[k] - q).abs() < 1e-6);
        }
    }

    #[test]
    fn gaussian_modes_match_hermite_functions() {
        let p = section3();
        let spectrum = decompose(&gaussian_state(&p, 100)).unwrap();
        let g = *spectrum.grid();
        for k in 0..4 {
            let a1: Vec<f64> = g
                .midpoints1()
                .iter()
                .map(|&x| analytic_mode(k, p.m1(), p.sigma1(), TABLE_K, x) * g.delta1().sqrt())
                .collect();
            let a2: Vec<f64> = g
                .midpoints2()
                .iter()
                .map(|&x| analytic_mode(k, p.m2(), p.sigma2(), TABLE_K, x) * g.delta2().sqrt())
                .collect();
            for (modes, analytic) in [(spectrum.modes1(), &a1), (spectrum.modes2(), &a2)] {
                let col = modes.column(k);
                let dot: f64 = col.iter().zip(analytic.iter()).map(|(a, b)| a * b).sum();
                let sign = dot.signum();
                let sup = col.iter().zip(analytic.iter()).map(|(a, b)| (sign * a - b).abs()).fold(0.0, f64::max);
                assert!(sup <= 1e-4, "k={k} sup={sup}");
            }
        }
    }

    #[test]
    fn schmidt_number_examples() {
        assert_eq!(schmidt_number(&[1.0]).unwrap(), 1.0);
        for m in 1..10 {
            let w = vec![1.0 / m as f64; m];
            assert!((schmidt_number(&w).unwrap() - m as f64).abs() < 1e-12);
        }
        let tail = crate::gaussian_model::GeometricSpectrum::from_schmidt_number(TABLE_K).unwrap().weights(400);
        assert!((schmidt_number(&tail).unwrap() - TABLE_K).abs() < 1e-12);
        assert!(schmidt_number(&[0.0, 0.0]).is_err());
        assert!(schmidt_number(&[]).is_err());
        assert!(schmidt_number(&[0.5, 0.2]).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entanglement_entropy(&[1.0, 0.0, 0.0], LogBase::E).unwrap(), 0.0);
        for m in 1..12 {
            let w = vec![1.0 / m as f64; m];
            assert!((entanglement_entropy(&w, LogBase::E).unwrap() - (m as f64).ln()).abs() < 1e-14);
            assert!((entanglement_entropy(&w, LogBase::Two).unwrap() - (m as f64).log2()).abs() < 1e-14);
        }
        let geo = crate::gaussian_model::GeometricSpectrum::from_schmidt_number(TABLE_K).unwrap().series_weights();
        let s = entanglement_entropy(&geo, LogBase::E).unwrap();
        let closed = crate::gaussian_model::closed_form_entropy(TABLE_K, LogBase::E).unwrap();
        assert!((s - closed).abs() < 1e-10);
        assert!(entanglement_entropy(&[1.0, -1e-13], LogBase::E).is_err());
        assert_eq!(entanglement_entropy(&[1.0, -1e-15], LogBase::E).unwrap(), 0.0);
    }

    #[test]
    fn reconstruction_residual_is_spectral_tail() {
        let spectrum = decompose(&gaussian_state(&section3(), 60)).unwrap();
        let original = gaussian_state(&section3(), 60);
        let mut last = f64::INFINITY;
        for rank in 1..=spectrum.len() {
            let r = reconstruct(&spectrum, rank).unwrap();
            let res = residual_norm(&original, &r);
            let tail: f64 = spectrum.weights()[rank..].iter().sum();
            assert!((res * res - tail).abs() <= 1e-10, "rank={rank}");
            assert!(res <= last + 1e-15);
            last = res;
        }
        assert!(last <= 1e-10);
        assert!(matches!(reconstruct(&spectrum, 0), Err(Error::RankOutOfRange { .. })));
        assert!(reconstruct(&spectrum, spectrum.len() + 1).is_err());
    }

    #[test]
    fn transpose_swaps_mode_roles() {
        let p = GaussianParams::new(0.0, 0.5, 1.0, 0.7, 0.6).unwrap();
        let g = GridSpec::new(40, 30, -6.0, 6.0, -4.0, 5.0).unwrap();
        let s = sample_state(|x, y| p.wavefunction(x, y), &g).unwrap();
        let a = decompose(&s).unwrap();
        let b = decompose(&s.transpose()).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).abs() < 1e-14);
        }
        assert_eq!(b.modes1().nrows(), a.modes2().nrows());
        for k in 0..4 {
            let dot: f64 = a.modes2().column(k).dot(&b.modes1().column(k));
            assert!((dot.abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn modes_follow_sign_convention() {
        let spectrum = decompose(&gaussian_state(&GaussianParams::standard(0.5).unwrap(), 40)).unwrap();
        for k in 0..spectrum.len() {
            let col = spectrum.modes1().column(k);
            let pivot = col.iter().fold(0.0f64, |b, &x| if x.abs() > b.abs() { x } else { b });
            assert!(pivot >= 0.0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn spectrum_normalized_and_modes_orthonormal(
            rho in -0.95f64..0.95,
            n1 in 4usize..30,
            n2 in 4usize..30,
        ) {
            let p = GaussianParams::standard(rho).unwrap();
            let g = GridSpec::new(n1, n2, -5.0, 5.0, -5.0, 5.0).unwrap();
            let s = sample_state(|x, y| p.wavefunction(x, y), &g).unwrap();
            let spectrum = decompose(&s).unwrap();
            prop_assert!((spectrum.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(spectrum.weights().windows(2).all(|w| w[0] >= w[1]));
            for modes in [spectrum.modes1(), spectrum.modes2()] {
                let gram = modes.transpose() * modes;
                for i in 0..gram.nrows() {
                    for j in 0..gram.ncols() {
                        let d = if i == j { 1.0 } else { 0.0 };
                        prop_assert!((gram[(i, j)] - d).abs() <= 1e-10);
                    }
                }
            }
        }

        #[test]
        fn joint_sign_flip_preserves_reconstruction(k in 0usize..5) {
            let s = gaussian_state(&section3(), 24);
            let spectrum = decompose(&s).unwrap();
            let mut flipped = spectrum.clone();
            flipped.modes1.column_mut(k).neg_mut();
            flipped.modes2.column_mut(k).neg_mut();
            let a = reconstruct(&spectrum, spectrum.len()).unwrap();
            let b = reconstruct(&flipped, spectrum.len()).unwrap();
            prop_assert!(residual_norm(&a, &b) < 1e-14);
            prop_assert_eq!(spectrum.schmidt_number(), flipped.schmidt_number());
        }
    }
}
