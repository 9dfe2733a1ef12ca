//! Turns command-line flags plus an optional problem file into a resolved
//! experiment.

use std::path::PathBuf;

use stringforce::benchmark::{self, Benchmark};
use stringforce::config;
use stringforce::inverse::RegularizationOrder;
use stringforce::noise::NoiseSpec;
use stringforce::{ControlKind, Grid, ProblemSpec, Profile};

use crate::args::Common;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaChoice {
    Values(Vec<f64>),
    /// Use the corner of the L-curve on the default grid.
    Corner,
}

pub struct Experiment {
    /// Preset name or config path, for the report.
    pub source: String,
    pub spec: ProblemSpec,
    pub control: ControlKind,
    pub n_time: Vec<usize>,
    pub n_space: Option<usize>,
    pub modes: Vec<usize>,
    pub noise: Option<NoiseSpec>,
    pub lambda: Option<LambdaChoice>,
    pub order: RegularizationOrder,
    pub global: bool,
    pub out: PathBuf,
    pub exact_force: Option<Profile>,
    /// Present only for presets.
    pub preset: Option<Benchmark>,
}

impl Experiment {
    pub fn resolve(args: &Common) -> Result<Self, CliError> {
        let (source, spec, file, preset) = match &args.config {
            Some(path) => {
                let cfg = config::load(path)?;
                (path.display().to_string(), cfg.spec.clone(), Some(cfg), None)
            }
            None => {
                let name = args.problem.as_deref().unwrap_or(benchmark::SINE);
                let b = benchmark::by_name(name).ok_or_else(|| {
                    CliError::Validation(format!(
                        "unknown problem {name:?}; known presets: {}",
                        benchmark::NAMES.join(", ")
                    ))
                })?;
                (name.to_string(), b.spec.clone(), None, Some(b))
            }
        };

        let control = match &args.control {
            Some(c) => config::parse_control(c)?,
            None => file
                .as_ref()
                .and_then(|f| f.control)
                .or(preset.as_ref().map(|b| b.control))
                .unwrap_or(ControlKind::Neumann),
        };

        let n_time = if !args.n_time.is_empty() {
            args.n_time.clone()
        } else {
            file.as_ref()
                .and_then(|f| f.n_time)
                .map(|n| vec![n])
                .unwrap_or_default()
        };
        let n_space = args.n_space.or(file.as_ref().and_then(|f| f.n_space));
        let modes = if !args.modes.is_empty() {
            args.modes.clone()
        } else {
            file.as_ref().and_then(|f| f.modes).map(|k| vec![k]).unwrap_or_default()
        };
        if n_time.contains(&0) || n_space == Some(0) || modes.contains(&0) {
            return Err(CliError::Validation("N, M and K must all be at least 1".into()));
        }

        if !(args.noise_pct >= 0.0 && args.noise_pct.is_finite()) {
            return Err(CliError::Validation(format!(
                "noise percent must be a finite non-negative number, got {}",
                args.noise_pct
            )));
        }
        let noise = (args.noise_pct > 0.0).then(|| NoiseSpec::new(args.noise_pct, args.seed));

        let lambda = args.lambda.as_deref().map(parse_lambda).transpose()?;
        let order = RegularizationOrder::from_index(args.reg_order)
            .ok_or_else(|| CliError::Validation(format!("bad regularisation order {}", args.reg_order)))?;

        let exact_force = match (&file, &preset) {
            (Some(f), _) => f.exact_force.clone(),
            (None, Some(b)) => b.exact_force.clone(),
            _ => None,
        };

        Ok(Self {
            source,
            spec,
            control,
            n_time,
            n_space,
            modes,
            noise,
            lambda,
            order,
            global: args.global,
            out: args.out.clone(),
            exact_force,
            preset,
        })
    }

    pub fn check_spec(&self) -> Result<(), CliError> {
        let v = self.spec.validate();
        if v.is_empty() {
            return Ok(());
        }
        let lines: Vec<String> = v.iter().map(|x| format!("  - {x}")).collect();
        Err(CliError::Validation(format!(
            "problem data are inconsistent:\n{}",
            lines.join("\n")
        )))
    }

    /// The mesh list, or `default` when none was given.
    pub fn meshes(&self, default: &[usize]) -> Vec<usize> {
        if self.n_time.is_empty() {
            default.to_vec()
        } else {
            self.n_time.clone()
        }
    }

    /// Exactly one `N` (default 80).
    pub fn single_mesh(&self) -> Result<usize, CliError> {
        match self.n_time.as_slice() {
            [] => Ok(80),
            [n] => Ok(*n),
            _ => Err(CliError::Validation("this command takes a single -N".into())),
        }
    }

    /// Exactly one `K` (default 20).
    pub fn single_modes(&self) -> Result<usize, CliError> {
        match self.modes.as_slice() {
            [] => Ok(20),
            [k] => Ok(*k),
            _ => Err(CliError::Validation("this command takes a single -K".into())),
        }
    }

    pub fn grid(&self, n_time: usize) -> Result<Grid, CliError> {
        let g = match self.n_space {
            Some(m) => Grid::new(&self.spec, n_time, m),
            None => Grid::matched(&self.spec, n_time),
        };
        g.map_err(|e| CliError::Validation(e.to_string()))
    }

    /// Closed-form coefficients, when the preset knows them for this control.
    pub fn analytic(&self, modes: usize) -> Option<Vec<f64>> {
        let b = self.preset.as_ref()?;
        if b.control != self.control {
            return None;
        }
        b.analytic_coefficients(modes)
    }

    pub fn exact_displacement(&self, x: f64, t: f64) -> Option<f64> {
        self.preset.as_ref()?.exact_displacement_at(x, t)
    }
}

pub fn parse_lambda(s: &str) -> Result<LambdaChoice, CliError> {
    if s.trim().eq_ignore_ascii_case("lcurve") {
        return Ok(LambdaChoice::Corner);
    }
    let mut values = Vec::new();
    for part in s.split(',') {
        let v: f64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("bad lambda {part:?}")))?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::Validation(format!("lambda must be finite and >= 0, got {v}")));
        }
        values.push(v);
    }
    Ok(LambdaChoice::Values(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_forms() {
        assert_eq!(parse_lambda("lcurve").unwrap(), LambdaChoice::Corner);
        assert_eq!(
            parse_lambda("0,0.1, 1e-2").unwrap(),
            LambdaChoice::Values(vec![0.0, 0.1, 0.01])
        );
        assert!(parse_lambda("-1").is_err());
        assert!(parse_lambda("x").is_err());
        assert!(parse_lambda("inf").is_err());
    }
}
