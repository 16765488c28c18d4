//! One-sided Jacobi SVD.
//!
//! Rotates pairs of columns until every pair is orthogonal to working
//! precision, `|a_p . a_q| <= sqrt(m) eps |a_p| |a_q|`. The column norms are
//! then the singular values. Small singular values keep high relative accuracy
//! and rank-deficient input needs no special handling, which matters because
//! Gaussian amplitude matrices have tails far below `eps * s_max`.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(s) V^T` with `s` sorted non-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v: DMatrix<f64>,
    pub sweeps: usize,
}

pub fn jacobi_svd(a: &DMatrix<f64>) -> Result<Svd> {
    if a.is_empty() {
        return Err(Error::Domain("SVD of an empty matrix".into()));
    }
    if a.nrows() >= a.ncols() {
        tall_svd(a)
    } else {
        let t = tall_svd(&a.transpose())?;
        Ok(Svd { u: t.v, singular_values: t.singular_values, v: t.u, sweeps: t.sweeps })
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

fn tall_svd(a: &DMatrix<f64>) -> Result<Svd> {
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j).iter().copied().collect()).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    let tol = (m as f64).sqrt() * f64::EPSILON;

    let mut sweeps = 0;
    loop {
        if sweeps == MAX_SWEEPS {
            return Err(Error::SvdNonConvergence { rows: m, cols: n, max_iterations: MAX_SWEEPS, eps: tol });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                // A column whose squared norm underflows is zero at this
                // precision, and the relative test could never pass against it.
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut vcols, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal singular values keep their column order.
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let smax = norms[order[0]];
    let null_below = smax * f64::MIN_POSITIVE.sqrt();
    let mut u = DMatrix::zeros(m, n);
    let mut v = DMatrix::zeros(n, n);
    let mut s = DVector::zeros(n);
    let mut null_cols = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        s[k] = norms[j];
        for r in 0..n {
            v[(r, k)] = vcols[j][r];
        }
        if norms[j] > null_below && norms[j] > 0.0 {
            for r in 0..m {
                u[(r, k)] = cols[j][r] / norms[j];
            }
        } else {
            null_cols.push(k);
        }
    }
    complete_basis(&mut u, &null_cols);
    Ok(Svd { u, singular_values: s, v, sweeps })
}

/// Fills the listed columns with unit vectors orthogonal to all others.
fn complete_basis(u: &mut DMatrix<f64>, targets: &[usize]) {
    if targets.is_empty() {
        return;
    }
    let m = u.nrows();
    let mut filled: Vec<usize> = (0..u.ncols()).filter(|k| !targets.contains(k)).collect();
    for &k in targets {
        let mut best: Option<DVector<f64>> = None;
        let mut best_norm = 0.0;
        for e in 0..m {
            let mut x = DVector::zeros(m);
            x[e] = 1.0;
            // Two Gram-Schmidt passes.
            for _ in 0..2 {
                for &f in &filled {
                    let col = u.column(f);
                    let proj = col.dot(&x);
                    x.axpy(-proj, &col, 1.0);
                }
            }
            let nrm = x.norm();
            if nrm > best_norm {
                best_norm = nrm;
                best = Some(x);
            }
            if nrm > 0.5 {
                break;
            }
        }
        let x = best.expect("m >= n leaves room for a completion vector");
        u.set_column(k, &(x / best_norm));
        filled.push(k);
    }
}
