use super::{DenseMatrix, LinalgError, Result};
use crate::tol;

fn check_square(a: &DenseMatrix, rhs: &[f64]) -> Result<()> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    if rhs.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("right-hand side of length {}", a.rows()),
            found: format!("length {}", rhs.len()),
        });
    }
    if a.rows() == 0 {
        return Err(LinalgError::Empty);
    }
    Ok(())
}

/// Solves `A x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve_ge(a: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    check_square(a, rhs)?;
    let n = a.rows();
    let mut m = a.clone();
    let mut b = rhs.to_vec();
    let threshold = tol::PIVOT * a.max_abs();

    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, m[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= threshold || pmax == 0.0 {
            let largest = pivots.iter().fold(pmax, |acc: f64, &x: &f64| acc.max(x));
            let smallest = pivots.iter().fold(pmax, |acc: f64, &x: &f64| acc.min(x));
            return Err(LinalgError::Singular {
                pivot: k,
                condition_estimate: if smallest > 0.0 {
                    largest / smallest
                } else {
                    f64::INFINITY
                },
            });
        }
        pivots.push(pmax);
        m.swap_rows(k, p);
        b.swap(k, p);

        let pivot = m[(k, k)];
        for i in k + 1..n {
            let factor = m[(i, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            m[(i, k)] = 0.0;
            for j in k + 1..n {
                let mkj = m[(k, j)];
                m[(i, j)] -= factor * mkj;
            }
            b[i] -= factor * b[k];
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (b[i] - s) / m[(i, i)];
    }
    Ok(x)
}

/// Solves a symmetric positive-definite system by Cholesky factorisation.
///
/// Only the lower triangle of `a` is read. A non-positive pivot yields
/// [`LinalgError::NotPositiveDefinite`].
pub fn solve_spd(a: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    check_square(a, rhs)?;
    let n = a.rows();
    let mut l = DenseMatrix::zeros(n, n);
    // Relative floor so that a numerically singular Gram matrix is reported
    // instead of producing a huge, meaningless solution.
    let scale = (0..n).fold(0.0_f64, |m, i| m.max(a[(i, i)].abs()));
    let floor = scale * f64::EPSILON * n as f64;

    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= floor || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { pivot: j, value: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }

    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
        y[i] = (rhs[i] - s) / l[(i, i)];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[(k, i)] * x[k]).sum();
        x[i] = (y[i] - s) / l[(i, i)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_returns_rhs() {
        let rhs = [1.5, -2.0, 3.25];
        assert_eq!(solve_ge(&DenseMatrix::identity(3), &rhs).unwrap(), rhs);
        assert_eq!(solve_spd(&DenseMatrix::identity(3), &rhs).unwrap(), rhs);
    }

    #[test]
    fn diagonal_system() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        assert_eq!(solve_ge(&a, &[2.0, 8.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn one_by_one_spd() {
        let a = DenseMatrix::from_rows(&[vec![4.0]]).unwrap();
        assert_eq!(solve_spd(&a, &[8.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(solve_ge(&a, &[3.0, 7.0]).unwrap(), vec![7.0, 3.0]);
    }

    #[test]
    fn random_well_conditioned_recovers_known_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        // Diagonally dominant => well conditioned.
        let a = DenseMatrix::from_fn(n, n, |i, j| {
            let r: f64 = rng.random_range(-1.0..1.0);
            if i == j {
                r + 2.0 * n as f64
            } else {
                r
            }
        });
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let rhs = a.mul_vec(&x_true).unwrap();
        let x = solve_ge(&a, &rhs).unwrap();
        let err = x.iter().zip(&x_true).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let scale = x_true.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(err <= 1e-10 * scale, "err = {err}");
    }

    #[test]
    fn singular_matrix_reported() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve_ge(&a, &[1.0, 2.0]),
            Err(LinalgError::Singular { pivot: 1, .. })
        ));
    }

    #[test]
    fn not_spd_reported() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            solve_spd(&a, &[1.0, 1.0]),
            Err(LinalgError::NotPositiveDefinite { pivot: 1, .. })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let a = DenseMatrix::identity(2);
        assert!(matches!(
            solve_ge(&a, &[1.0]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
        let rect = DenseMatrix::zeros(2, 3);
        assert!(matches!(
            solve_spd(&rect, &[1.0, 1.0]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spd_agrees_with_ge() {
        let b = DenseMatrix::from_fn(6, 4, |i, j| ((i + 1) as f64).powi(j as i32 % 3) + 0.1 * j as f64);
        let mut a = b.gram();
        a.add_scaled(0.5, &DenseMatrix::identity(4)).unwrap();
        let rhs = [1.0, -2.0, 0.5, 3.0];
        let x1 = solve_ge(&a, &rhs).unwrap();
        let x2 = solve_spd(&a, &rhs).unwrap();
        for (p, q) in x1.iter().zip(&x2) {
            assert_relative_eq!(p, q, max_relative = 1e-10);
        }
    }
}
