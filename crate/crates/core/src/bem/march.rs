//! Time marching: at step `n` the history sums `F`, `G` are known and the two
//! unknown boundary values follow from a 2x2 system solved in closed form.

use super::basis::{basis_space_integral, basis_time_integral, space_cell, step_coefficients, time_element};
use super::{BemError, BoundaryTraces, DirectProblem, InitialSamples};
use crate::model::{BoundaryKind, Grid};
use crate::tol;

/// Right-hand sides `(F, G)` of the two boundary equations at step `n`.
/// Only trace entries before step `n` are read.
pub fn assemble_rhs(n: usize, traces: &BoundaryTraces, initial: &InitialSamples, grid: &Grid) -> (f64, f64) {
    let c = grid.wave_speed;
    let t_n = grid.t(n);
    let delayed = t_n - grid.length / c;
    let reflected = time_element(delayed, grid);

    let mut f = 0.0;
    let mut g = 0.0;
    for j in 1..n {
        let full = basis_time_integral(j, t_n, grid);
        let part = basis_time_integral(j, delayed, grid);
        if reflected == Some(j) {
            f += traces.v_l[j - 1];
            g += traces.v0[j - 1];
        }
        f += c * (traces.dv_l[j - 1] * part - traces.dv0[j - 1] * full);
        g += c * (traces.dv_l[j - 1] * full - traces.dv0[j - 1] * part);
    }

    let reach = c * t_n;
    if let Some(i) = space_cell(reach, grid) {
        f += initial.displacement[i - 1];
    }
    if let Some(i) = space_cell(grid.length - reach, grid) {
        g += initial.displacement[i - 1];
    }
    for (i, v) in initial.velocity.iter().enumerate() {
        f += v * basis_space_integral(i + 1, 0.0, reach, grid) / c;
        g += v * basis_space_integral(i + 1, grid.length - reach, grid.length, grid) / c;
    }
    (f, g)
}

fn checked(step: usize, det: f64, scale: f64) -> Result<f64, BemError> {
    if det.abs() <= tol::STEP_SINGULAR * scale.max(f64::MIN_POSITIVE) || !det.is_finite() {
        Err(BemError::SingularStep { step, denominator: det })
    } else {
        Ok(det)
    }
}

/// Dispatches on the boundary condition kinds at both ends.
pub fn march(problem: &DirectProblem) -> Result<BoundaryTraces, BemError> {
    march_with(problem, "march")
}

/// Dirichlet data at both ends; the two fluxes are unknown.
pub fn march_dirichlet(problem: &DirectProblem) -> Result<BoundaryTraces, BemError> {
    require(
        problem,
        "march_dirichlet",
        BoundaryKind::Dirichlet,
        BoundaryKind::Dirichlet,
    )?;
    march_with(problem, "march_dirichlet")
}

/// Dirichlet data at `x = 0`, Neumann data at `x = L`.
pub fn march_mixed(problem: &DirectProblem) -> Result<BoundaryTraces, BemError> {
    require(problem, "march_mixed", BoundaryKind::Dirichlet, BoundaryKind::Neumann)?;
    march_with(problem, "march_mixed")
}

fn require(
    problem: &DirectProblem,
    solver: &'static str,
    left: BoundaryKind,
    right: BoundaryKind,
) -> Result<(), BemError> {
    if problem.left != left || problem.right != right {
        return Err(BemError::WrongConfiguration {
            solver,
            left: problem.left,
            right: problem.right,
        });
    }
    Ok(())
}

fn march_with(problem: &DirectProblem, name: &'static str) -> Result<BoundaryTraces, BemError> {
    problem.check_zero_ends()?;
    let grid = &problem.grid;
    let mut tr = BoundaryTraces::zeros(grid);
    log::debug!(
        "{name}: N={} M={} left={:?} right={:?}",
        grid.n_time,
        grid.n_space,
        problem.left,
        problem.right
    );

    for n in 1..=grid.n_time {
        let k = n - 1;
        let (f, g) = assemble_rhs(n, &tr, &problem.initial, grid);
        let s = step_coefficients(n, grid);
        let (a, b, d) = (s.a, s.b, s.d);
        let p = problem.left_data[k];
        let q = problem.right_data[k];

        match (problem.left, problem.right) {
            (BoundaryKind::Dirichlet, BoundaryKind::Dirichlet) => {
                let ft = f - p + b * q;
                let gt = g - q + b * p;
                let det = checked(n, d * d - a * a, a * a + d * d)?;
                tr.v0[k] = p;
                tr.v_l[k] = q;
                tr.dv0[k] = (d * gt - a * ft) / det;
                tr.dv_l[k] = (a * gt - d * ft) / det;
            }
            (BoundaryKind::Dirichlet, BoundaryKind::Neumann) => {
                let ft = f - p + d * q;
                let gt = g + b * p + a * q;
                let det = checked(n, a + d * b, a + d)?;
                tr.v0[k] = p;
                tr.dv_l[k] = q;
                tr.dv0[k] = (ft + b * gt) / det;
                tr.v_l[k] = (a * gt - d * ft) / det;
            }
            (BoundaryKind::Neumann, BoundaryKind::Dirichlet) => {
                let f1 = f - a * p + b * q;
                let g1 = g - q - d * p;
                let det = checked(n, a + d * b, a + d)?;
                tr.dv0[k] = p;
                tr.v_l[k] = q;
                tr.v0[k] = (a * f1 - d * g1) / det;
                tr.dv_l[k] = -(g1 + b * f1) / det;
            }
            (BoundaryKind::Neumann, BoundaryKind::Neumann) => {
                let pp = f - a * p + d * q;
                let rr = g + a * q - d * p;
                let det = checked(n, 1.0 - b * b, 1.0)?;
                tr.dv0[k] = p;
                tr.dv_l[k] = q;
                tr.v0[k] = (pp + b * rr) / det;
                tr.v_l[k] = (rr + b * pp) / det;
            }
        }
    }
    Ok(tr)
}
