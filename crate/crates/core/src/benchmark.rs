//! Named problem presets and the closed-form function registry used by
//! config files.
//!
//! The reference problem has `c = L = T = 1`, Dirichlet data at both ends and
//! the exact solution `u(x,t) = sin(pi x) + t + t^2/2` with force
//! `f(x) = 1 + pi^2 sin(pi x)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::inverse::analytic_coefficients;
use crate::model::{BoundaryKind, ControlKind, ProblemSpec, Profile};

pub const SINE: &str = "benchmark-sine";
pub const COSINE: &str = "benchmark-cosine";
pub const ZERO: &str = "zero-data";

/// Every preset name, in registry order.
pub const NAMES: [&str; 3] = [SINE, COSINE, ZERO];

type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A problem together with the control used to invert it and, when known,
/// its exact solution.
#[derive(Clone)]
pub struct Benchmark {
    pub name: &'static str,
    pub spec: ProblemSpec,
    pub control: ControlKind,
    pub exact_force: Option<Profile>,
    pub exact_displacement: Option<Field>,
    analytic: Option<fn(usize) -> Vec<f64>>,
}

impl fmt::Debug for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Benchmark")
            .field("name", &self.name)
            .field("control", &self.control)
            .finish_non_exhaustive()
    }
}

impl Benchmark {
    /// Closed-form series coefficients of the exact force, if known.
    pub fn analytic_coefficients(&self, modes: usize) -> Option<Vec<f64>> {
        self.analytic.map(|f| f(modes))
    }

    pub fn exact_displacement_at(&self, x: f64, t: f64) -> Option<f64> {
        self.exact_displacement.as_ref().map(|u| u(x, t))
    }
}

pub fn by_name(name: &str) -> Option<Benchmark> {
    match name {
        SINE => Some(sine()),
        COSINE => Some(cosine()),
        ZERO => Some(zero()),
        _ => None,
    }
}

fn reference_spec() -> ProblemSpec {
    ProblemSpec {
        wave_speed: 1.0,
        length: 1.0,
        horizon: 1.0,
        boundary_kind: BoundaryKind::Dirichlet,
        initial_displacement: function("sin_pi_x").expect("registry entry"),
        initial_velocity: function("one").expect("registry entry"),
        left_dirichlet: function("t_plus_half_t2").expect("registry entry"),
        right_data: function("t_plus_half_t2").expect("registry entry"),
        measured_flux: function("pi").expect("registry entry"),
    }
}

fn reference_force() -> Profile {
    Profile::closed("1+pi^2 sin(pi x)", |x| 1.0 + PI * PI * (PI * x).sin())
        .with_derivative(|x| PI.powi(3) * (PI * x).cos())
}

fn reference_displacement() -> Field {
    Arc::new(|x: f64, t: f64| (PI * x).sin() + t + 0.5 * t * t)
}

/// Flux-measured reference problem (sine series).
pub fn sine() -> Benchmark {
    Benchmark {
        name: SINE,
        spec: reference_spec(),
        control: ControlKind::Neumann,
        exact_force: Some(reference_force()),
        exact_displacement: Some(reference_displacement()),
        analytic: Some(|k| analytic_coefficients(ControlKind::Neumann, k)),
    }
}

/// Displacement-measured reference problem (cosine series).
pub fn cosine() -> Benchmark {
    Benchmark {
        name: COSINE,
        spec: reference_spec(),
        control: ControlKind::Dirichlet,
        exact_force: Some(reference_force()),
        exact_displacement: Some(reference_displacement()),
        analytic: Some(|k| analytic_coefficients(ControlKind::Dirichlet, k)),
    }
}

/// All data identically zero; the solution and force vanish.
pub fn zero() -> Benchmark {
    let z = Profile::zero;
    Benchmark {
        name: ZERO,
        spec: ProblemSpec {
            wave_speed: 1.0,
            length: 1.0,
            horizon: 1.0,
            boundary_kind: BoundaryKind::Dirichlet,
            initial_displacement: z(),
            initial_velocity: z(),
            left_dirichlet: z(),
            right_data: z(),
            measured_flux: z(),
        },
        control: ControlKind::Neumann,
        exact_force: Some(z()),
        exact_displacement: Some(Arc::new(|_, _| 0.0)),
        analytic: Some(|k| vec![0.0; k]),
    }
}

/// Names accepted by [`function`].
pub const FUNCTION_NAMES: [&str; 8] = [
    "zero",
    "one",
    "pi",
    "identity",
    "sin_pi_x",
    "cos_pi_x",
    "sin_half_pi_x",
    "t_plus_half_t2",
];

/// Closed-form profiles that config files may refer to by name.
pub fn function(name: &str) -> Option<Profile> {
    let p = match name {
        "zero" => Profile::zero(),
        "one" => Profile::constant(1.0),
        "pi" => Profile::closed("pi", |_| PI).with_derivative(|_| 0.0),
        "identity" => Profile::closed("identity", |x| x).with_derivative(|_| 1.0),
        "sin_pi_x" => Profile::closed("sin_pi_x", |x| (PI * x).sin()).with_derivative(|x| PI * (PI * x).cos()),
        "cos_pi_x" => Profile::closed("cos_pi_x", |x| (PI * x).cos()).with_derivative(|x| -PI * (PI * x).sin()),
        "sin_half_pi_x" => Profile::closed("sin_half_pi_x", |x| (0.5 * PI * x).sin())
            .with_derivative(|x| 0.5 * PI * (0.5 * PI * x).cos()),
        "t_plus_half_t2" => Profile::closed("t_plus_half_t2", |t| t + 0.5 * t * t).with_derivative(|t| 1.0 + t),
        _ => return None,
    };
    Some(p)
}
