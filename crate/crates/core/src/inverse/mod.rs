//! Series inversion for the force.
//!
//! With zero initial data and a time-independent force, the remaining part
//! `w` of the displacement is a finite eigenfunction series whose boundary
//! trace at `x = 0` is linear in the coefficients `b_k`:
//!
//! * Neumann control: `w_x(0, t_n) = sum_k Q_nk b_k`, sine series for `f`;
//! * Dirichlet control: `w(0, t_n) = sum_k Q_nk b_k`, cosine series for `f`.
//!
//! `b` is then found from noisy boundary data by Tikhonov-regularised least
//! squares.

mod lcurve;
mod tikhonov;

pub use lcurve::{default_lambda_grid, lcurve, LCurve, LCurvePoint, SURVEY_LAMBDAS};
pub use tikhonov::{
    difference_operator, tikhonov_solve, RegularizationConfig, RegularizationOrder, RegularizedSolution,
};

use std::f64::consts::{PI, SQRT_2};

use thiserror::Error;

use crate::bem::BoundaryTraces;
use crate::linalg::{svd, DenseMatrix, LinalgError, Svd};
use crate::model::{BoundaryKind, ControlKind, Grid, ProblemSpec, SampledField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InverseError {
    #[error("{0}")]
    Linalg(#[from] LinalgError),

    #[error("normal equations are numerically singular at lambda = {lambda:e}; use lambda > 0")]
    SingularNormalEquations { lambda: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Dirichlet control needs a Dirichlet condition at x = L (mu = 1)")]
    UnsupportedControl,

    #[error("invalid regularisation parameter: {0}")]
    InvalidLambda(String),

    #[error("need at least one mode (K >= 1)")]
    NoModes,
}

/// `lambda_k = k pi / L` for `mu = 1`, `(k - 1/2) pi / L` for `mu = 0`.
pub fn eigenvalue(k: usize, length: f64, boundary: BoundaryKind) -> f64 {
    debug_assert!(k >= 1);
    match boundary {
        BoundaryKind::Dirichlet => k as f64 * PI / length,
        BoundaryKind::Neumann => (k as f64 - 0.5) * PI / length,
    }
}

/// Eigenvalues used by a control kind. Dirichlet control always uses the
/// half-integer family.
pub fn eigenvalues(control: ControlKind, modes: usize, length: f64, boundary: BoundaryKind) -> Vec<f64> {
    let family = match control {
        ControlKind::Neumann => boundary,
        ControlKind::Dirichlet => BoundaryKind::Neumann,
    };
    (1..=modes).map(|k| eigenvalue(k, length, family)).collect()
}

/// `N x K` map from series coefficients to the boundary trace of `w` at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub entries: DenseMatrix,
    pub control: ControlKind,
    pub eigenvalues: Vec<f64>,
    pub wave_speed: f64,
}

impl DesignMatrix {
    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn modes(&self) -> usize {
        self.entries.cols()
    }

    pub fn svd(&self) -> Result<Svd, InverseError> {
        Ok(svd(&self.entries)?)
    }
}

pub fn assemble_design_matrix(
    grid: &Grid,
    modes: usize,
    control: ControlKind,
    boundary: BoundaryKind,
) -> Result<DesignMatrix, InverseError> {
    if modes == 0 {
        return Err(InverseError::NoModes);
    }
    if control == ControlKind::Dirichlet && boundary != BoundaryKind::Dirichlet {
        return Err(InverseError::UnsupportedControl);
    }
    if modes > grid.n_time {
        log::warn!(
            "K = {modes} exceeds N = {}; the unregularised problem is underdetermined",
            grid.n_time
        );
    }
    let c = grid.wave_speed;
    let lambdas = eigenvalues(control, modes, grid.length, boundary);
    let power = match control {
        ControlKind::Neumann => 1,
        ControlKind::Dirichlet => 2,
    };
    let entries = DenseMatrix::from_fn(grid.n_time, modes, |n, k| {
        let lk = lambdas[k];
        SQRT_2 * (1.0 - (c * lk * grid.t(n + 1)).cos()) / (c * c * lk.powi(power))
    });
    Ok(DesignMatrix {
        entries,
        control,
        eigenvalues: lambdas,
        wave_speed: c,
    })
}

/// `sigma_max / sigma_min`; infinite for a rank-deficient matrix.
pub fn condition_number(q: &DesignMatrix) -> Result<f64, InverseError> {
    Ok(q.svd()?.condition_number())
}

/// Condition number of the normal matrix `Q^T Q`, i.e. the square of
/// [`condition_number`]. This is the quantity tabulated for the benchmark.
pub fn normal_condition_number(q: &DesignMatrix) -> Result<f64, InverseError> {
    let c = condition_number(q)?;
    Ok(c * c)
}

fn basis(control: ControlKind, lambda: f64, x: f64) -> f64 {
    match control {
        ControlKind::Neumann => (lambda * x).sin(),
        ControlKind::Dirichlet => (lambda * x).cos(),
    }
}

/// `f_K(x) = sqrt(2) sum_k b_k sin(lambda_k x)` (cosine for Dirichlet control).
pub fn reconstruct_force(b: &[f64], eigenvalues: &[f64], control: ControlKind, xs: &[f64]) -> Vec<f64> {
    debug_assert_eq!(b.len(), eigenvalues.len());
    xs.iter()
        .map(|&x| {
            SQRT_2
                * b.iter()
                    .zip(eigenvalues)
                    .map(|(bk, &lk)| bk * basis(control, lk, x))
                    .sum::<f64>()
        })
        .collect()
}

/// `w_K(x, t) = (sqrt(2)/c^2) sum_k b_k (1 - cos(c lambda_k t)) / lambda_k^2 X_k(x)`.
pub fn reconstruct_w(
    b: &[f64],
    eigenvalues: &[f64],
    control: ControlKind,
    wave_speed: f64,
    xs: &[f64],
    ts: &[f64],
) -> SampledField {
    let c2 = wave_speed * wave_speed;
    SampledField::from_fn(xs, ts, |x, t| {
        SQRT_2 / c2
            * b.iter()
                .zip(eigenvalues)
                .map(|(bk, &lk)| bk * (1.0 - (wave_speed * lk * t).cos()) / (lk * lk) * basis(control, lk, x))
                .sum::<f64>()
    })
}

/// Right-hand side of the inverse problem from measured boundary samples at
/// the trace times: `q0 - v_x(0, .)` for Neumann control, `p0 - v(0, .)` for
/// Dirichlet control.
pub fn inverse_data_from_samples(
    control: ControlKind,
    traces: &BoundaryTraces,
    measured: &[f64],
) -> Result<Vec<f64>, InverseError> {
    if measured.len() != traces.len() {
        return Err(InverseError::DimensionMismatch(format!(
            "{} measured samples for {} time steps",
            measured.len(),
            traces.len()
        )));
    }
    let computed = match control {
        ControlKind::Neumann => &traces.dv0,
        ControlKind::Dirichlet => &traces.v0,
    };
    Ok(measured.iter().zip(computed).map(|(m, v)| m - v).collect())
}

/// The measured quantity for a control kind, sampled at the trace times.
pub fn measured_samples(control: ControlKind, spec: &ProblemSpec, times: &[f64]) -> Vec<f64> {
    match control {
        ControlKind::Neumann => spec.measured_flux.sample(times),
        ControlKind::Dirichlet => spec.left_dirichlet.sample(times),
    }
}

pub fn inverse_data(control: ControlKind, traces: &BoundaryTraces, spec: &ProblemSpec) -> Vec<f64> {
    let measured = measured_samples(control, spec, &traces.times);
    inverse_data_from_samples(control, traces, &measured).expect("samples taken at trace times")
}

/// Closed-form coefficients of `f(x) = 1 + pi^2 sin(pi x)` on `[0, 1]` in the
/// orthonormal sine basis `sqrt(2) sin(k pi x)` (Neumann control) or cosine
/// basis `sqrt(2) cos((k - 1/2) pi x)` (Dirichlet control).
pub fn analytic_coefficients(control: ControlKind, modes: usize) -> Vec<f64> {
    (1..=modes)
        .map(|k| match control {
            ControlKind::Neumann => sine_coefficient(k),
            ControlKind::Dirichlet => cosine_coefficient(k),
        })
        .collect()
}

fn sine_coefficient(k: usize) -> f64 {
    if k == 1 {
        2.0 * SQRT_2 / PI + PI * PI / SQRT_2
    } else if k.is_multiple_of(2) {
        0.0
    } else {
        2.0 * SQRT_2 / (k as f64 * PI)
    }
}

fn cosine_coefficient(k: usize) -> f64 {
    let pi2 = PI * PI;
    if k == 1 {
        return 2.0 * SQRT_2 * (2.0 * pi2 + 3.0) / (3.0 * PI);
    }
    let kf = k as f64;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let num = 2.0 * pi2 * (2.0 * kf - 1.0) + sign * (4.0 * kf * kf - 4.0 * kf - 3.0);
    let den = PI * (8.0 * kf.powi(3) - 12.0 * kf * kf - 2.0 * kf + 3.0);
    -2.0 * SQRT_2 * num / den
}

/// Euclidean norm of the difference.
pub fn error_norm(numerical: &[f64], exact: &[f64]) -> Result<f64, InverseError> {
    if numerical.len() != exact.len() {
        return Err(InverseError::DimensionMismatch(format!(
            "{} vs {} samples",
            numerical.len(),
            exact.len()
        )));
    }
    Ok(numerical
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark;

    fn unit_grid(n: usize) -> Grid {
        Grid::from_dimensions(1.0, 1.0, 1.0, n, n).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(1, 1.0, BoundaryKind::Dirichlet), PI);
        assert_eq!(eigenvalue(1, 1.0, BoundaryKind::Neumann), PI / 2.0);
        assert!((eigenvalue(3, 2.0, BoundaryKind::Dirichlet) - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn design_matrix_entries() {
        let n = 20;
        let q = assemble_design_matrix(&unit_grid(n), 5, ControlKind::Neumann, BoundaryKind::Dirichlet).unwrap();
        assert!(q.entries[(n - 1, 1)].abs() < 1e-15);
        assert!((q.entries[(n - 1, 0)] - 0.900316).abs() < 1e-6);
        let qd = assemble_design_matrix(&unit_grid(n), 5, ControlKind::Dirichlet, BoundaryKind::Dirichlet).unwrap();
        assert!((qd.entries[(n - 1, 0)] - 4.0 * SQRT_2 / (PI * PI)).abs() < 1e-15);
        assert!((qd.entries[(n - 1, 0)] - 0.57319).abs() < 1e-4);
        for q in [&q, &qd] {
            assert!(q.entries.as_slice().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn column_zero_structure() {
        let n = 40;
        let q = assemble_design_matrix(&unit_grid(n), 10, ControlKind::Neumann, BoundaryKind::Dirichlet).unwrap();
        for row in 0..n {
            for k in 1..=10 {
                if (k * (row + 1)) % (2 * n) == 0 {
                    assert!(q.entries[(row, k - 1)].abs() < 1e-14, "n={} k={k}", row + 1);
                }
            }
        }
    }

    #[test]
    fn dirichlet_control_needs_mu_one() {
        let r = assemble_design_matrix(&unit_grid(10), 3, ControlKind::Dirichlet, BoundaryKind::Neumann);
        assert_eq!(r.unwrap_err(), InverseError::UnsupportedControl);
        assert_eq!(
            assemble_design_matrix(&unit_grid(10), 0, ControlKind::Neumann, BoundaryKind::Dirichlet).unwrap_err(),
            InverseError::NoModes
        );
    }

    #[test]
    fn tabulated_condition_numbers() {
        let cases = [
            (ControlKind::Neumann, 20, 5, 82.62),
            (ControlKind::Neumann, 80, 20, 1.54e3),
            (ControlKind::Dirichlet, 20, 5, 3.55e3),
        ];
        for (control, n, k, want) in cases {
            let q = assemble_design_matrix(&unit_grid(n), k, control, BoundaryKind::Dirichlet).unwrap();
            let got = normal_condition_number(&q).unwrap();
            let rel = (got - want).abs() / want;
            assert!(rel < 0.02, "{control} N={n} K={k}: {got} vs {want}");
            assert!((condition_number(&q).unwrap().powi(2) - got).abs() < 1e-9 * got);
        }
    }

    #[test]
    fn analytic_values() {
        let s = analytic_coefficients(ControlKind::Neumann, 6);
        assert!((s[0] - 7.8791).abs() < 5e-4);
        assert!((s[0] - 7.879_180_515_795_984).abs() < 1e-12);
        assert_eq!(s[1], 0.0);
        assert_eq!(s[3], 0.0);
        assert!((s[2] - 0.30011).abs() < 1e-5);
        let c = analytic_coefficients(ControlKind::Dirichlet, 3);
        assert!((c[0] - 6.8242).abs() < 5e-4);
    }

    /// The cosine coefficients are the projections of the reference force;
    /// compare with a fine midpoint quadrature.
    #[test]
    fn cosine_coefficients_match_quadrature() {
        let f = benchmark::cosine().exact_force.unwrap();
        let m = 20_000;
        let h = 1.0 / m as f64;
        let c = analytic_coefficients(ControlKind::Dirichlet, 8);
        for (k, ck) in c.iter().enumerate() {
            let lk = (k as f64 + 0.5) * PI;
            let q: f64 = (0..m)
                .map(|i| {
                    let x = (i as f64 + 0.5) * h;
                    f.eval(x) * SQRT_2 * (lk * x).cos() * h
                })
                .sum();
            assert!((q - ck).abs() < 1e-6, "k={}: {q} vs {ck}", k + 1);
        }
    }

    #[test]
    fn force_and_w_series() {
        let lam = eigenvalues(ControlKind::Neumann, 1, 1.0, BoundaryKind::Dirichlet);
        assert!((reconstruct_force(&[1.0], &lam, ControlKind::Neumann, &[0.5])[0] - SQRT_2).abs() < 1e-15);
        assert_eq!(reconstruct_force(&[0.0], &lam, ControlKind::Neumann, &[0.3]), vec![0.0]);
        let w = reconstruct_w(&[1.0], &lam, ControlKind::Neumann, 1.0, &[0.5], &[1.0]);
        assert!((w.values[0] - 2.0 * SQRT_2 / (PI * PI)).abs() < 1e-12);

        let b = [0.3, -1.2, 2.0];
        let xs = [0.0, 0.4, 0.9];
        for control in [ControlKind::Neumann, ControlKind::Dirichlet] {
            let lam = eigenvalues(control, 3, 1.0, BoundaryKind::Dirichlet);
            let w0 = reconstruct_w(&b, &lam, control, 1.3, &xs, &[0.0]);
            assert!(w0.values.iter().all(|&v| v == 0.0));
        }
        let lam = eigenvalues(ControlKind::Neumann, 3, 1.0, BoundaryKind::Dirichlet);
        let w = reconstruct_w(&b, &lam, ControlKind::Neumann, 1.0, &[0.0], &[0.2, 0.7, 1.0]);
        assert!(w.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn truncated_sine_series_interior_error() {
        let b = analytic_coefficients(ControlKind::Neumann, 20);
        let lam = eigenvalues(ControlKind::Neumann, 20, 1.0, BoundaryKind::Dirichlet);
        let f = benchmark::sine().exact_force.unwrap();
        let xs: Vec<f64> = (1..80).map(|i| i as f64 / 80.0).collect();
        let fk = reconstruct_force(&b, &lam, ControlKind::Neumann, &xs);
        // Interior points away from the Gibbs layer.
        let worst = xs
            .iter()
            .zip(&fk)
            .filter(|(x, _)| **x >= 0.1 && **x <= 0.9)
            .map(|(x, v)| (v - f.eval(*x)).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.25, "{worst}");
    }

    #[test]
    fn error_norm_examples() {
        assert_eq!(error_norm(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(error_norm(&[3.0, 4.0], &[0.0, 0.0]).unwrap(), 5.0);
        assert!(matches!(
            error_norm(&[1.0], &[]),
            Err(InverseError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn inverse_data_zero_when_measured_matches() {
        let grid = unit_grid(4);
        let mut tr = BoundaryTraces::zeros(&grid);
        tr.dv0 = vec![1.0, 2.0, 3.0, 4.0];
        let g = inverse_data_from_samples(ControlKind::Neumann, &tr, &tr.dv0.clone()).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
        assert!(inverse_data_from_samples(ControlKind::Neumann, &tr, &[1.0]).is_err());
    }
}
