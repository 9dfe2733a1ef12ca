//! Piecewise-constant basis functions on the uniform grid.
//!
//! Time element `j` is `(t_{j-1}, t_j]` and space cell `i` is
//! `(x_{i-1}, x_i]`, both 1-based. Coordinates within
//! [`tol::GRID_SNAP`] cell widths of a node are treated as lying on it, so
//! that e.g. `c t_n` lands on `x_n` exactly when the Courant number is 1.

use crate::model::Grid;
use crate::tol;

/// Rounds `s` (a coordinate in units of the cell width) to the nearest
/// integer when it is within the snapping distance.
fn snap(s: f64) -> f64 {
    let r = s.round();
    if (s - r).abs() <= tol::GRID_SNAP * s.abs().max(1.0) {
        r
    } else {
        s
    }
}

fn locate(coord: f64, width: f64, count: usize) -> Option<usize> {
    let s = snap(coord / width);
    if s <= 0.0 {
        return None;
    }
    let idx = s.ceil() as usize;
    (idx <= count).then_some(idx)
}

/// Index `j` with `t` in `(t_{j-1}, t_j]`, or `None` outside `(0, T]`.
pub fn time_element(t: f64, grid: &Grid) -> Option<usize> {
    locate(t, grid.dt, grid.n_time)
}

/// Index `i` with `x` in `(x_{i-1}, x_i]`, or `None` outside `(0, L]`.
pub fn space_cell(x: f64, grid: &Grid) -> Option<usize> {
    locate(x, grid.dx, grid.n_space)
}

/// `int_0^upper theta^j(tau) dtau`: the length of `(t_{j-1}, t_j] ∩ (0, upper]`.
/// Zero whenever `upper <= t_{j-1}`.
pub fn basis_time_integral(j: usize, upper: f64, grid: &Grid) -> f64 {
    debug_assert!(j >= 1 && j <= grid.n_time);
    let u = snap(upper / grid.dt);
    let lo = (j - 1) as f64;
    if u <= lo {
        return 0.0;
    }
    (u.min(j as f64) - lo) * grid.dt
}

/// `int_lo^hi psi_i(x) dx` with the interval clipped to `[0, L]`.
pub fn basis_space_integral(i: usize, lo: f64, hi: f64, grid: &Grid) -> f64 {
    debug_assert!(i >= 1 && i <= grid.n_space);
    let a = snap(lo / grid.dx).max(0.0).max((i - 1) as f64);
    let b = snap(hi / grid.dx).min(grid.n_space as f64).min(i as f64);
    if b <= a {
        0.0
    } else {
        (b - a) * grid.dx
    }
}

/// Coefficients of the unknowns at step `n` in the two boundary equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCoefficients {
    /// `c int_0^{t_n} theta^n`
    pub a: f64,
    /// `phi^n(t_n - L/c)`
    pub b: f64,
    /// `c int_0^{t_n - L/c} theta^n`
    pub d: f64,
}

pub fn step_coefficients(n: usize, grid: &Grid) -> StepCoefficients {
    let c = grid.wave_speed;
    let t_n = grid.t(n);
    let delayed = t_n - grid.length / c;
    StepCoefficients {
        a: c * basis_time_integral(n, t_n, grid),
        b: if time_element(delayed, grid) == Some(n) {
            1.0
        } else {
            0.0
        },
        d: c * basis_time_integral(n, delayed, grid),
    }
}
