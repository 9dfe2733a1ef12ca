//! Boundary element solution of the force-free direct problem
//! `v_tt = c^2 v_xx` on `(0, L) x (0, T]`.
//!
//! The boundary integral equations at `x = 0` and `x = L` are discretised
//! with piecewise-constant interpolation in time (elements `(t_{j-1}, t_j]`)
//! and space (cells `(x_{i-1}, x_i]`). Each time step couples the four
//! boundary values `v(0,t_n)`, `v(L,t_n)`, `v_x(0,t_n)`, `v_x(L,t_n)`; two of
//! them are prescribed, the other two are obtained either by marching in time
//! or from one global `2N x 2N` system.

mod basis;
mod global;
mod interior;
mod lift;
mod march;

pub use basis::{
    basis_space_integral, basis_time_integral, space_cell, step_coefficients, time_element, StepCoefficients,
};
pub use global::solve_global;
pub use interior::{interior_field, interior_solution};
pub use lift::{lift_initial, AffineLift};
pub use march::{assemble_rhs, march, march_dirichlet, march_mixed};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::model::{BoundaryKind, ControlKind, Grid, ProblemSpec, SampledField};
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BemError {
    #[error("singular time step {step}: denominator {denominator:.3e}")]
    SingularStep { step: usize, denominator: f64 },

    #[error(
        "initial displacement must vanish at both ends (u0(0) = {left}, u0(L) = {right}); apply lift_initial first"
    )]
    NonZeroInitialEnds { left: f64, right: f64 },

    #[error("{solver} does not handle left {left:?} / right {right:?} boundary conditions")]
    WrongConfiguration {
        solver: &'static str,
        left: BoundaryKind,
        right: BoundaryKind,
    },

    #[error("interior point {0} is outside (0, L)")]
    OutsideDomain(f64),

    #[error("time index {index} outside 1..={n_time}")]
    TimeIndex { index: usize, n_time: usize },

    #[error("global BEM system: {0}")]
    Linalg(#[from] LinalgError),
}

/// Initial displacement and velocity at the cell nodes `x_1..x_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialSamples {
    pub displacement: Vec<f64>,
    pub velocity: Vec<f64>,
}

/// Boundary values at `t_1..t_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTraces {
    pub times: Vec<f64>,
    /// `v(0, t_n)`
    pub v0: Vec<f64>,
    /// `v(L, t_n)`
    pub v_l: Vec<f64>,
    /// `v_x(0, t_n)`
    pub dv0: Vec<f64>,
    /// `v_x(L, t_n)`
    pub dv_l: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceComponent {
    V0,
    VL,
    Dv0,
    DvL,
}

impl BoundaryTraces {
    pub fn zeros(grid: &Grid) -> Self {
        let n = grid.n_time;
        Self {
            times: grid.times(),
            v0: vec![0.0; n],
            v_l: vec![0.0; n],
            dv0: vec![0.0; n],
            dv_l: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn component(&self, c: TraceComponent) -> &[f64] {
        match c {
            TraceComponent::V0 => &self.v0,
            TraceComponent::VL => &self.v_l,
            TraceComponent::Dv0 => &self.dv0,
            TraceComponent::DvL => &self.dv_l,
        }
    }

    pub fn max_abs_diff(&self, other: &BoundaryTraces) -> f64 {
        [&self.v0, &self.v_l, &self.dv0, &self.dv_l]
            .into_iter()
            .zip([&other.v0, &other.v_l, &other.dv0, &other.dv_l])
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let s = |v: &Vec<f64>| v.iter().map(|x| alpha * x).collect();
        Self {
            times: self.times.clone(),
            v0: s(&self.v0),
            v_l: s(&self.v_l),
            dv0: s(&self.dv0),
            dv_l: s(&self.dv_l),
        }
    }
}

/// Max-abs difference of one component between a coarse and a finer run, taken
/// at the coarse time nodes (the fine grid must refine the coarse one).
pub fn mesh_difference(coarse: &BoundaryTraces, fine: &BoundaryTraces, c: TraceComponent) -> Option<f64> {
    if coarse.is_empty() || !fine.len().is_multiple_of(coarse.len()) {
        return None;
    }
    let ratio = fine.len() / coarse.len();
    let a = coarse.component(c);
    let b = fine.component(c);
    Some(
        a.iter()
            .enumerate()
            .map(|(n, v)| (v - b[(n + 1) * ratio - 1]).abs())
            .fold(0.0, f64::max),
    )
}

/// Discretised direct problem: grid, boundary condition kinds and sampled data.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectProblem {
    pub grid: Grid,
    /// Condition at `x = 0`: `Dirichlet` prescribes `v(0,t)`, `Neumann` prescribes `v_x(0,t)`.
    pub left: BoundaryKind,
    pub right: BoundaryKind,
    /// Prescribed left data at `t_1..t_N`.
    pub left_data: Vec<f64>,
    /// Prescribed right data at `t_1..t_N`.
    pub right_data: Vec<f64>,
    pub initial: InitialSamples,
    /// `u0(0)`
    pub initial_left: f64,
    /// `u0(L)`
    pub initial_right: f64,
}

impl DirectProblem {
    /// The direct problem that pairs with a given control: the measured
    /// quantity at `x = 0` is replaced by the other boundary datum.
    pub fn for_control(spec: &ProblemSpec, control: ControlKind, grid: &Grid) -> Self {
        let left = match control {
            ControlKind::Neumann => BoundaryKind::Dirichlet,
            ControlKind::Dirichlet => BoundaryKind::Neumann,
        };
        Self::with_left(spec, left, grid)
    }

    pub fn with_left(spec: &ProblemSpec, left: BoundaryKind, grid: &Grid) -> Self {
        let times = grid.times();
        let nodes = grid.nodes();
        let left_profile = match left {
            BoundaryKind::Dirichlet => &spec.left_dirichlet,
            BoundaryKind::Neumann => &spec.measured_flux,
        };
        Self {
            grid: *grid,
            left,
            right: spec.boundary_kind,
            left_data: left_profile.sample(&times),
            right_data: spec.right_data.sample(&times),
            initial: InitialSamples {
                displacement: spec.initial_displacement.sample(&nodes),
                velocity: spec.initial_velocity.sample(&nodes),
            },
            initial_left: spec.initial_displacement.eval(0.0),
            initial_right: spec.initial_displacement.eval(spec.length),
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let s = |v: &[f64]| v.iter().map(|x| alpha * x).collect::<Vec<_>>();
        Self {
            grid: self.grid,
            left: self.left,
            right: self.right,
            left_data: s(&self.left_data),
            right_data: s(&self.right_data),
            initial: InitialSamples {
                displacement: s(&self.initial.displacement),
                velocity: s(&self.initial.velocity),
            },
            initial_left: alpha * self.initial_left,
            initial_right: alpha * self.initial_right,
        }
    }

    /// `u0(0)` and `u0(L)` are zero up to rounding.
    pub fn ends_vanish(&self) -> bool {
        let scale = self.initial.displacement.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let bound = tol::COMPATIBILITY * scale;
        self.initial_left.abs() <= bound && self.initial_right.abs() <= bound
    }

    fn check_zero_ends(&self) -> Result<(), BemError> {
        if !self.ends_vanish() {
            return Err(BemError::NonZeroInitialEnds {
                left: self.initial_left,
                right: self.initial_right,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DirectMethod {
    #[default]
    Marching,
    Global,
}

/// A solved direct problem. Traces are in the original variables; interior
/// values are evaluated on the lifted problem and shifted back.
#[derive(Debug, Clone)]
pub struct DirectSolution {
    pub traces: BoundaryTraces,
    lifted: DirectProblem,
    lifted_traces: BoundaryTraces,
    pub lift: AffineLift,
}

impl DirectSolution {
    pub fn grid(&self) -> &Grid {
        &self.lifted.grid
    }

    /// `v(xi, t_n)` for `0 < xi < L`, `1 <= n <= N`.
    pub fn interior(&self, xi: f64, n: usize) -> Result<f64, BemError> {
        let v = interior_solution(&self.lifted_traces, &self.lifted.initial, &self.lifted.grid, xi, n)?;
        Ok(self.lift.restore_value(xi, v))
    }

    pub fn interior_field(&self, xs: &[f64], steps: &[usize]) -> Result<SampledField, BemError> {
        let mut field = interior_field(&self.lifted_traces, &self.lifted.initial, &self.lifted.grid, xs, steps)?;
        let nx = xs.len();
        for (k, v) in field.values.iter_mut().enumerate() {
            *v = self.lift.restore_value(xs[k % nx], *v);
        }
        Ok(field)
    }
}

/// Solves any direct problem, lifting non-zero initial end values first.
pub fn solve_direct(problem: &DirectProblem, method: DirectMethod) -> Result<DirectSolution, BemError> {
    let (lifted, lift) = lift_initial(problem);
    let lifted_traces = match method {
        DirectMethod::Marching => march(&lifted)?,
        DirectMethod::Global => solve_global(&lifted)?,
    };
    let mut traces = lifted_traces.clone();
    lift.restore_traces(&mut traces, problem.grid.length);
    Ok(DirectSolution {
        traces,
        lifted,
        lifted_traces,
        lift,
    })
}
