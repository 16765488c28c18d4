//! Uniform midpoint grids and normalized amplitude matrices.

use crate::gaussian_model::GaussianParams;
use crate::{neumaier_sum, Error, Execution, LogBase, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Grid span used when the caller does not choose one, in standard
/// deviations per axis.
pub const DEFAULT_SPAN: f64 = 10.0;

/// Tolerance on the total mass accepted by [`marginals`].
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Uniform rectangular grid of `n1 x n2` cells; samples sit at cell midpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n1: usize,
    pub n2: usize,
    pub lo1: f64,
    pub hi1: f64,
    pub lo2: f64,
    pub hi2: f64,
}

impl GridSpec {
    pub fn new(n1: usize, n2: usize, lo1: f64, hi1: f64, lo2: f64, hi2: f64) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points per axis, got {n1}x{n2}")));
        }
        for (axis, lo, hi) in [(1, lo1, hi1), (2, lo2, hi2)] {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidGrid(format!("axis {axis} bounds must be finite")));
            }
            if !(hi > lo) {
                return Err(Error::InvalidGrid(format!("axis {axis}: need hi > lo, got [{lo}, {hi}]")));
            }
        }
        let grid = Self { n1, n2, lo1, hi1, lo2, hi2 };
        if !(grid.delta1() > 0.0 && grid.delta2() > 0.0) {
            return Err(Error::InvalidGrid("cell widths underflow to zero".into()));
        }
        Ok(grid)
    }

    pub fn delta1(&self) -> f64 {
        (self.hi1 - self.lo1) / self.n1 as f64
    }

    pub fn delta2(&self) -> f64 {
        (self.hi2 - self.lo2) / self.n2 as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.delta1() * self.delta2()
    }

    pub fn midpoint1(&self, j: usize) -> f64 {
        self.lo1 + (j as f64 + 0.5) * self.delta1()
    }

    pub fn midpoint2(&self, j: usize) -> f64 {
        self.lo2 + (j as f64 + 0.5) * self.delta2()
    }

    pub fn midpoints1(&self) -> Vec<f64> {
        (0..self.n1).map(|j| self.midpoint1(j)).collect()
    }

    pub fn midpoints2(&self) -> Vec<f64> {
        (0..self.n2).map(|j| self.midpoint2(j)).collect()
    }

    /// Same grid with the axes swapped.
    pub fn transposed(&self) -> Self {
        Self { n1: self.n2, n2: self.n1, lo1: self.lo2, hi1: self.hi2, lo2: self.lo1, hi2: self.hi1 }
    }
}

/// `n x n` grid covering `m_i +- span * sigma_i` on each axis.
pub fn build_grid(params: &GaussianParams, n: usize, span: f64) -> Result<GridSpec> {
    if !(span > 0.0 && span.is_finite()) {
        return Err(Error::InvalidGrid(format!("span must be positive, got {span}")));
    }
    GridSpec::new(
        n,
        n,
        params.m1() - span * params.sigma1(),
        params.m1() + span * params.sigma1(),
        params.m2() - span * params.sigma2(),
        params.m2() + span * params.sigma2(),
    )
}

/// Amplitude matrix `psi_{j1 j2}` on a grid.
///
/// Entries are midpoint samples scaled by `sqrt(cell area)`, so the squared
/// Frobenius norm approximates the integral of `|psi|^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretizedState {
    grid: GridSpec,
    amplitudes: DMatrix<f64>,
    norm_applied: bool,
    raw_norm: f64,
}

impl DiscretizedState {
    /// Wraps already-scaled amplitudes and rescales them to unit norm.
    pub fn normalized(grid: GridSpec, amplitudes: DMatrix<f64>) -> Result<Self> {
        Self::normalized_with(grid, amplitudes, Execution::default())
    }

    pub fn normalized_with(grid: GridSpec, mut amplitudes: DMatrix<f64>, exec: Execution) -> Result<Self> {
        check_shape(&grid, &amplitudes)?;
        check_finite(&amplitudes)?;
        let norm = frobenius_norm(&amplitudes, exec);
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        amplitudes.unscale_mut(norm);
        Ok(Self { grid, amplitudes, norm_applied: true, raw_norm: norm })
    }

    /// Wraps amplitudes as they are, e.g. a truncated reconstruction.
    pub fn unnormalized(grid: GridSpec, amplitudes: DMatrix<f64>) -> Result<Self> {
        check_shape(&grid, &amplitudes)?;
        let raw_norm = frobenius_norm(&amplitudes, Execution::Sequential);
        Ok(Self { grid, amplitudes, norm_applied: false, raw_norm })
    }

    /// Builds a state from raw midpoint samples of `psi` (not yet scaled by
    /// the cell area), as read from a state file.
    pub fn from_samples(grid: GridSpec, samples: DMatrix<f64>) -> Result<Self> {
        check_shape(&grid, &samples)?;
        let scaled = samples * grid.cell_area().sqrt();
        Self::normalized(grid, scaled)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn amplitudes(&self) -> &DMatrix<f64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DMatrix<f64> {
        self.amplitudes
    }

    pub fn norm_applied(&self) -> bool {
        self.norm_applied
    }

    /// Frobenius norm of the amplitudes before rescaling.
    pub fn raw_norm(&self) -> f64 {
        self.raw_norm
    }

    /// Joint probabilities `|psi_{j1 j2}|^2`.
    pub fn probabilities(&self) -> DMatrix<f64> {
        self.amplitudes.map(|a| a * a)
    }

    pub fn transpose(&self) -> Self {
        Self {
            grid: self.grid.transposed(),
            amplitudes: self.amplitudes.transpose(),
            norm_applied: self.norm_applied,
            raw_norm: self.raw_norm,
        }
    }
}

fn check_shape(grid: &GridSpec, m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != grid.n1 || m.ncols() != grid.n2 {
        return Err(Error::InvalidGrid(format!(
            "matrix is {}x{} but grid is {}x{}",
            m.nrows(),
            m.ncols(),
            grid.n1,
            grid.n2
        )));
    }
    Ok(())
}

fn check_finite(m: &DMatrix<f64>) -> Result<()> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            if !m[(row, col)].is_finite() {
                return Err(Error::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

/// Row-wise sums of squares combined in row order.
fn frobenius_norm(m: &DMatrix<f64>, exec: Execution) -> f64 {
    let rows = exec.map_indexed(m.nrows(), |r| neumaier_sum(m.row(r).iter().map(|a| a * a)));
    neumaier_sum(rows).sqrt()
}

/// Samples `f` at the grid midpoints and normalizes.
pub fn sample_state<F>(f: F, grid: &GridSpec) -> Result<DiscretizedState>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    sample_state_with(f, grid, Execution::default())
}

pub fn sample_state_with<F>(f: F, grid: &GridSpec, exec: Execution) -> Result<DiscretizedState>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let scale = grid.cell_area().sqrt();
    let xs2 = grid.midpoints2();
    let rows = exec.map_indexed(grid.n1, |r| {
        let x1 = grid.midpoint1(r);
        xs2.iter().map(|&x2| f(x1, x2) * scale).collect::<Vec<f64>>()
    });
    let amplitudes = DMatrix::from_fn(grid.n1, grid.n2, |r, c| rows[r][c]);
    DiscretizedState::normalized_with(*grid, amplitudes, exec)
}

/// Row and column sums of a joint distribution.
pub fn marginals(p_joint: &DMatrix<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    validate_joint(p_joint)?;
    let rows = (0..p_joint.nrows()).map(|r| neumaier_sum(p_joint.row(r).iter().copied())).collect();
    let cols = (0..p_joint.ncols()).map(|c| neumaier_sum(p_joint.column(c).iter().copied())).collect();
    Ok((rows, cols))
}

fn validate_joint(p: &DMatrix<f64>) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty joint matrix".into()));
    }
    for col in 0..p.ncols() {
        for row in 0..p.nrows() {
            let v = p[(row, col)];
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "entry ({row}, {col}) = {v} is not a nonnegative number"
                )));
            }
        }
    }
    let total = neumaier_sum(p.iter().copied());
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("total mass {total} differs from 1")));
    }
    Ok(())
}

/// Mutual information `sum p log(p / (p1 p2))` of a discrete joint
/// distribution; zero cells contribute nothing.
pub fn shannon_mi_numeric(p_joint: &DMatrix<f64>, base: LogBase) -> Result<f64> {
    shannon_mi_numeric_with(p_joint, base, Execution::default())
}

pub fn shannon_mi_numeric_with(p_joint: &DMatrix<f64>, base: LogBase, exec: Execution) -> Result<f64> {
    let (p1, p2) = marginals(p_joint)?;
    let ln1: Vec<f64> = p1.iter().map(|v| v.ln()).collect();
    let ln2: Vec<f64> = p2.iter().map(|v| v.ln()).collect();
    let rows = exec.map_indexed(p_joint.nrows(), |r| -> Result<f64> {
        let mut terms = Vec::with_capacity(p_joint.ncols());
        for c in 0..p_joint.ncols() {
            let p = p_joint[(r, c)];
            if p == 0.0 {
                continue;
            }
            if p1[r] == 0.0 || p2[c] == 0.0 {
                return Err(Error::InconsistentJoint { row: r, col: c });
            }
            // Logs are taken separately so tiny marginal products do not underflow.
            terms.push(p * (p.ln() - ln1[r] - ln2[c]));
        }
        Ok(neumaier_sum(terms))
    });
    let rows = rows.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(base.from_nats(neumaier_sum(rows)))
}
