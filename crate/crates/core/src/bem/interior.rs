//! Interior values from the boundary traces and initial data.

use super::basis::{basis_space_integral, basis_time_integral, space_cell, time_element};
use super::{BemError, BoundaryTraces, InitialSamples};
use crate::model::{Grid, SampledField};

/// `v(xi, t_n)` for `0 < xi < L` and `1 <= n <= N`.
///
/// The initial displacement must vanish at both ends (see
/// [`lift_initial`](super::lift_initial)); otherwise points near the
/// boundaries see a spurious jump.
pub fn interior_solution(
    traces: &BoundaryTraces,
    initial: &InitialSamples,
    grid: &Grid,
    xi: f64,
    n: usize,
) -> Result<f64, BemError> {
    if !(xi > 0.0 && xi < grid.length) {
        return Err(BemError::OutsideDomain(xi));
    }
    if n == 0 || n > grid.n_time || n > traces.len() {
        return Err(BemError::TimeIndex {
            index: n,
            n_time: grid.n_time,
        });
    }
    let c = grid.wave_speed;
    let t_n = grid.t(n);
    let from_left = t_n - xi / c;
    let from_right = t_n - (grid.length - xi) / c;
    let (el, er) = (time_element(from_left, grid), time_element(from_right, grid));

    let mut sum = 0.0;
    for j in 1..=n {
        let k = j - 1;
        if el == Some(j) {
            sum += traces.v0[k];
        }
        if er == Some(j) {
            sum += traces.v_l[k];
        }
        sum += c
            * (traces.dv_l[k] * basis_time_integral(j, from_right, grid)
                - traces.dv0[k] * basis_time_integral(j, from_left, grid));
    }

    let reach = c * t_n;
    for x in [xi - reach, xi + reach] {
        if let Some(i) = space_cell(x, grid) {
            sum += initial.displacement[i - 1];
        }
    }
    let (lo, hi) = (xi - reach, xi + reach);
    let first = space_cell(lo.max(0.0), grid).unwrap_or(1);
    let last = space_cell(hi.min(grid.length), grid).unwrap_or(grid.n_space);
    for i in first..=last {
        sum += initial.velocity[i - 1] * basis_space_integral(i, lo, hi, grid) / c;
    }
    Ok(0.5 * sum)
}

/// Interior solution on `xs x {t_n : n in steps}`.
pub fn interior_field(
    traces: &BoundaryTraces,
    initial: &InitialSamples,
    grid: &Grid,
    xs: &[f64],
    steps: &[usize],
) -> Result<SampledField, BemError> {
    let ts: Vec<f64> = steps.iter().map(|&n| grid.t(n)).collect();
    let mut field = SampledField::zeros(xs, &ts);
    let mut k = 0;
    for &n in steps {
        for &x in xs {
            field.values[k] = interior_solution(traces, initial, grid, x, n)?;
            k += 1;
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bem::{solve_direct, DirectMethod, DirectProblem};
    use crate::benchmark;
    use crate::model::ControlKind;

    #[test]
    fn rejects_boundary_points() {
        let b = benchmark::sine();
        let grid = Grid::new(&b.spec, 10, 10).unwrap();
        let sol = solve_direct(
            &DirectProblem::for_control(&b.spec, ControlKind::Neumann, &grid),
            DirectMethod::Marching,
        )
        .unwrap();
        assert!(matches!(sol.interior(0.0, 3), Err(BemError::OutsideDomain(_))));
        assert!(matches!(sol.interior(1.0, 3), Err(BemError::OutsideDomain(_))));
        assert!(matches!(sol.interior(0.5, 0), Err(BemError::TimeIndex { .. })));
        assert!(matches!(sol.interior(0.5, 11), Err(BemError::TimeIndex { .. })));
    }

    #[test]
    fn benchmark_interior_close_to_exact() {
        // The force-free part v of the reference problem has no closed form,
        // but with zero force v solves the homogeneous equation; its interior
        // values must at least reproduce the boundary data as xi -> 0.
        let b = benchmark::sine();
        let grid = Grid::new(&b.spec, 80, 80).unwrap();
        let sol = solve_direct(
            &DirectProblem::for_control(&b.spec, ControlKind::Neumann, &grid),
            DirectMethod::Marching,
        )
        .unwrap();
        for n in [10, 40, 80] {
            let near = sol.interior(1e-6, n).unwrap();
            let p0 = b.spec.left_dirichlet.eval(grid.t(n));
            assert!((near - p0).abs() < 0.05, "n={n}: {near} vs {p0}");
        }
    }

    #[test]
    fn field_layout_is_time_major() {
        let b = benchmark::sine();
        let grid = Grid::new(&b.spec, 20, 20).unwrap();
        let sol = solve_direct(
            &DirectProblem::for_control(&b.spec, ControlKind::Neumann, &grid),
            DirectMethod::Marching,
        )
        .unwrap();
        let xs = [0.25, 0.5, 0.75];
        let steps = [5, 20];
        let field = sol.interior_field(&xs, &steps).unwrap();
        assert_eq!(field.get(1, 1), sol.interior(0.5, 20).unwrap());
        assert_eq!(field.get(2, 0), sol.interior(0.75, 5).unwrap());
    }
}
