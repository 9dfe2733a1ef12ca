//! Affine shift that makes the initial displacement vanish at both ends.
//!
//! With `s = (u0(L) - u0(0)) / L` and `a = u0(0)`, the function
//! `v - s x - a` solves the same homogeneous wave equation, with shifted
//! initial and boundary data.

use super::{BoundaryTraces, DirectProblem};
use crate::model::BoundaryKind;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AffineLift {
    pub slope: f64,
    pub offset: f64,
}

impl AffineLift {
    pub fn is_identity(&self) -> bool {
        self.slope == 0.0 && self.offset == 0.0
    }

    pub fn value(&self, x: f64) -> f64 {
        self.slope * x + self.offset
    }

    pub fn restore_value(&self, x: f64, v: f64) -> f64 {
        v + self.value(x)
    }

    pub fn restore_traces(&self, traces: &mut BoundaryTraces, length: f64) {
        if self.is_identity() {
            return;
        }
        let right = self.value(length);
        for k in 0..traces.len() {
            traces.v0[k] += self.offset;
            traces.v_l[k] += right;
            traces.dv0[k] += self.slope;
            traces.dv_l[k] += self.slope;
        }
    }
}

/// Returns the shifted problem and the shift to add back. Data whose initial
/// displacement already vanishes at the ends (to rounding) are returned
/// unchanged.
pub fn lift_initial(problem: &DirectProblem) -> (DirectProblem, AffineLift) {
    let mut out = problem.clone();
    if problem.ends_vanish() {
        return (out, AffineLift::default());
    }
    let grid = &problem.grid;
    let lift = AffineLift {
        slope: (problem.initial_right - problem.initial_left) / grid.length,
        offset: problem.initial_left,
    };
    for (i, u) in out.initial.displacement.iter_mut().enumerate() {
        *u -= lift.value(grid.x(i + 1));
    }
    let left_shift = match problem.left {
        BoundaryKind::Dirichlet => lift.offset,
        BoundaryKind::Neumann => lift.slope,
    };
    let right_shift = match problem.right {
        BoundaryKind::Dirichlet => lift.value(grid.length),
        BoundaryKind::Neumann => lift.slope,
    };
    out.left_data.iter_mut().for_each(|p| *p -= left_shift);
    out.right_data.iter_mut().for_each(|p| *p -= right_shift);
    out.initial_left = 0.0;
    out.initial_right = 0.0;
    (out, lift)
}
