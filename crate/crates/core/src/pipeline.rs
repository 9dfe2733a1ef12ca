//! End-to-end inversion: direct BEM solve for `v`, inverse data, design
//! matrix, regularised solve, reconstruction of `f` and `u = v + w`.

use thiserror::Error;

use crate::bem::{solve_direct, BemError, DirectMethod, DirectProblem, DirectSolution};
use crate::inverse::{
    assemble_design_matrix, inverse_data_from_samples, measured_samples, reconstruct_force, reconstruct_w,
    tikhonov_solve, DesignMatrix, InverseError, RegularizationConfig, RegularizedSolution,
};
use crate::model::{superpose, ControlKind, Grid, ModelError, ProblemSpec, SampledField, Violation};
use crate::noise::{perturb, NoiseSpec};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("problem data are inconsistent:\n{}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Bem(#[from] BemError),

    #[error(transparent)]
    Inverse(#[from] InverseError),
}

impl PipelineError {
    /// Bad input rather than a numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            PipelineError::Validation(_)
                | PipelineError::Model(_)
                | PipelineError::Inverse(InverseError::UnsupportedControl)
                | PipelineError::Inverse(InverseError::NoModes)
                | PipelineError::Inverse(InverseError::InvalidLambda(_))
                | PipelineError::Inverse(InverseError::DimensionMismatch(_))
        )
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| format!("  - {x}")).collect::<Vec<_>>().join("\n")
}

/// Everything up to, but not including, the choice of `lambda`.
#[derive(Debug, Clone)]
pub struct Inversion {
    pub control: ControlKind,
    pub grid: Grid,
    pub direct: DirectSolution,
    /// Measured samples before noise.
    pub clean: Vec<f64>,
    /// Measured samples as used (equal to `clean` without noise).
    pub measured: Vec<f64>,
    /// `g = q0 - v_x(0, .)` or `h = p0 - v(0, .)` at `t_1..t_N`.
    pub data: Vec<f64>,
    pub design: DesignMatrix,
}

impl Inversion {
    pub fn prepare(
        spec: &ProblemSpec,
        control: ControlKind,
        grid: &Grid,
        modes: usize,
        noise: Option<NoiseSpec>,
        method: DirectMethod,
    ) -> Result<Self, PipelineError> {
        let violations = spec.validate();
        if !violations.is_empty() {
            return Err(PipelineError::Validation(violations));
        }
        let design = assemble_design_matrix(grid, modes, control, spec.boundary_kind)?;
        let problem = DirectProblem::for_control(spec, control, grid);
        let direct = solve_direct(&problem, method)?;
        let clean = measured_samples(control, spec, &direct.traces.times);
        let measured = match noise {
            Some(n) => perturb(&clean, n),
            None => clean.clone(),
        };
        let data = inverse_data_from_samples(control, &direct.traces, &measured)?;
        Ok(Self {
            control,
            grid: *grid,
            direct,
            clean,
            measured,
            data,
            design,
        })
    }

    pub fn solve(&self, config: RegularizationConfig) -> Result<RegularizedSolution, InverseError> {
        tikhonov_solve(&self.design, &self.data, config)
    }

    pub fn force(&self, b: &[f64], xs: &[f64]) -> Vec<f64> {
        reconstruct_force(b, &self.design.eigenvalues, self.control, xs)
    }

    pub fn w_field(&self, b: &[f64], xs: &[f64], steps: &[usize]) -> SampledField {
        let ts: Vec<f64> = steps.iter().map(|&n| self.grid.t(n)).collect();
        reconstruct_w(b, &self.design.eigenvalues, self.control, self.grid.wave_speed, xs, &ts)
    }

    /// `u = v + w` at interior points `xs` and time steps `steps`.
    pub fn displacement(&self, b: &[f64], xs: &[f64], steps: &[usize]) -> Result<SampledField, PipelineError> {
        let v = self.direct.interior_field(xs, steps)?;
        let w = self.w_field(b, xs, steps);
        Ok(superpose(&v, &w)?)
    }
}

/// `x_i = i L / intervals` for `i = 0..=intervals`.
pub fn uniform_points(length: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals).map(|i| i as f64 * length / intervals as f64).collect()
}

/// The 81-point force grid on `[0, L]`.
pub fn force_grid(length: f64) -> Vec<f64> {
    uniform_points(length, 80)
}

/// `count` interior points `x = i L / (count + 1)` and `count` time steps
/// spread evenly over `1..=N` (the last one is `N`).
pub fn interior_grid(grid: &Grid, count: usize) -> (Vec<f64>, Vec<usize>) {
    let xs = (1..=count)
        .map(|i| i as f64 * grid.length / (count + 1) as f64)
        .collect();
    let steps = (1..=count)
        .map(|j| ((j * grid.n_time) as f64 / count as f64).round().max(1.0) as usize)
        .collect();
    (xs, steps)
}
