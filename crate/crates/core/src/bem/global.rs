//! All time steps at once: the boundary equations for `n = 1..N` form a
//! block lower-triangular `2N x 2N` system in the unknown boundary values.

use super::basis::{basis_time_integral, time_element};
use super::march::assemble_rhs;
use super::{BemError, BoundaryTraces, DirectProblem};
use crate::linalg::{solve_ge, DenseMatrix};
use crate::model::BoundaryKind;

/// Which of the four boundary values is unknown at every step, in column order.
#[derive(Clone, Copy, PartialEq)]
enum Slot {
    V0,
    VL,
    Dv0,
    DvL,
}

fn unknown_slots(left: BoundaryKind, right: BoundaryKind) -> [Slot; 2] {
    let l = match left {
        BoundaryKind::Dirichlet => Slot::Dv0,
        BoundaryKind::Neumann => Slot::V0,
    };
    let r = match right {
        BoundaryKind::Dirichlet => Slot::DvL,
        BoundaryKind::Neumann => Slot::VL,
    };
    [l, r]
}

pub fn solve_global(problem: &DirectProblem) -> Result<BoundaryTraces, BemError> {
    problem.check_zero_ends()?;
    let grid = &problem.grid;
    let n_time = grid.n_time;
    let c = grid.wave_speed;
    let slots = unknown_slots(problem.left, problem.right);

    // Prescribed values; the unknown entries are filled in after the solve.
    let mut known = BoundaryTraces::zeros(grid);
    for k in 0..n_time {
        match problem.left {
            BoundaryKind::Dirichlet => known.v0[k] = problem.left_data[k],
            BoundaryKind::Neumann => known.dv0[k] = problem.left_data[k],
        }
        match problem.right {
            BoundaryKind::Dirichlet => known.v_l[k] = problem.right_data[k],
            BoundaryKind::Neumann => known.dv_l[k] = problem.right_data[k],
        }
    }
    // With all traces zero the history sums vanish and assemble_rhs returns
    // only the initial-data part.
    let empty = BoundaryTraces::zeros(grid);

    let size = 2 * n_time;
    let mut m = DenseMatrix::zeros(size, size);
    let mut rhs = vec![0.0; size];

    for n in 1..=n_time {
        let t_n = grid.t(n);
        let delayed = t_n - grid.length / c;
        let reflected = time_element(delayed, grid);
        let (ra, rb) = (2 * (n - 1), 2 * (n - 1) + 1);
        let (mut fa, mut fb) = assemble_rhs(n, &empty, &problem.initial, grid);

        for j in 1..=n {
            let full = c * basis_time_integral(j, t_n, grid);
            let part = c * basis_time_integral(j, delayed, grid);
            let phi = if reflected == Some(j) { 1.0 } else { 0.0 };
            let own = if j == n { 1.0 } else { 0.0 };
            // Row a: v0 + c I(t_n) dv0 - phi vL - c I(s) dvL = F_init
            // Row b: vL - c I(t_n) dvL - phi v0 + c I(s) dv0 = G_init
            let coef = |slot: Slot| match slot {
                Slot::V0 => (own, -phi),
                Slot::VL => (-phi, own),
                Slot::Dv0 => (full, part),
                Slot::DvL => (-part, -full),
            };
            for slot in [Slot::V0, Slot::VL, Slot::Dv0, Slot::DvL] {
                let (ca, cb) = coef(slot);
                if ca == 0.0 && cb == 0.0 {
                    continue;
                }
                match slots.iter().position(|&s| s == slot) {
                    Some(col) => {
                        let col = 2 * (j - 1) + col;
                        m[(ra, col)] += ca;
                        m[(rb, col)] += cb;
                    }
                    None => {
                        let v = value(&known, slot, j - 1);
                        fa -= ca * v;
                        fb -= cb * v;
                    }
                }
            }
        }
        rhs[ra] = fa;
        rhs[rb] = fb;
    }

    let x = solve_ge(&m, &rhs)?;
    let mut tr = known;
    for j in 0..n_time {
        for (col, slot) in slots.iter().enumerate() {
            let v = x[2 * j + col];
            match slot {
                Slot::V0 => tr.v0[j] = v,
                Slot::VL => tr.v_l[j] = v,
                Slot::Dv0 => tr.dv0[j] = v,
                Slot::DvL => tr.dv_l[j] = v,
            }
        }
    }
    Ok(tr)
}

fn value(tr: &BoundaryTraces, slot: Slot, k: usize) -> f64 {
    match slot {
        Slot::V0 => tr.v0[k],
        Slot::VL => tr.v_l[k],
        Slot::Dv0 => tr.dv0[k],
        Slot::DvL => tr.dv_l[k],
    }
}
