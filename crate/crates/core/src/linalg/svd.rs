//! One-sided (Hestenes) Jacobi SVD.
//!
//! Orthogonalises the columns of `A` by plane rotations applied from the
//! right; the column norms of the converged matrix are the singular values.
//! Accurate to high relative precision for the small, ill-conditioned
//! design matrices this crate produces.

use super::{dot, DenseMatrix, LinalgError, Result};
use crate::tol;

/// Thin singular value decomposition `A = U diag(s) V^T`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Singular values in descending order.
    pub singular_values: Vec<f64>,
    /// Left singular vectors as columns, `rows x min(rows, cols)`.
    pub u: DenseMatrix,
    /// Right singular vectors as columns, `cols x min(rows, cols)`.
    pub v: DenseMatrix,
    /// Number of Jacobi sweeps performed.
    pub sweeps: usize,
}

impl Svd {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// `sigma_max / sigma_min`, infinite when the smallest value is zero.
    pub fn condition_number(&self) -> f64 {
        let lo = self.smallest();
        if lo == 0.0 {
            f64::INFINITY
        } else {
            self.largest() / lo
        }
    }

    /// `s_k / s_1` for every k.
    pub fn normalized(&self) -> Vec<f64> {
        let s1 = self.largest();
        self.singular_values
            .iter()
            .map(|s| if s1 > 0.0 { s / s1 } else { 0.0 })
            .collect()
    }
}

pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(LinalgError::Empty);
    }
    if a.rows() < a.cols() {
        let t = svd(&a.transpose())?;
        return Ok(Svd {
            singular_values: t.singular_values,
            u: t.v,
            v: t.u,
            sweeps: t.sweeps,
        });
    }

    let m = a.rows();
    let n = a.cols();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut sweeps = 0;
    loop {
        if sweeps == tol::SVD_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= tol::SVD_OFF_DIAGONAL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut vcols, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (dot(c, c).sqrt(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut u = DenseMatrix::zeros(m, n);
    let mut v = DenseMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &(sigma, j)) in order.iter().enumerate() {
        singular_values.push(sigma);
        for i in 0..m {
            u[(i, k)] = if sigma > 0.0 { cols[j][i] / sigma } else { 0.0 };
        }
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
    }

    Ok(Svd {
        singular_values,
        u,
        v,
        sweeps,
    })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}
