//! Problem definition: data profiles, the forward/inverse problem record,
//! the space-time grid and sampled fields.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

/// Condition imposed at the right end `x = L` (`mu` in problem files).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// `u(L, t) = p_L(t)`, `mu = 1`.
    Dirichlet,
    /// `u_x(L, t) = p_L(t)`, `mu = 0`.
    Neumann,
}

impl BoundaryKind {
    pub fn mu(self) -> u8 {
        match self {
            Self::Dirichlet => 1,
            Self::Neumann => 0,
        }
    }

    pub fn from_mu(mu: u8) -> Option<Self> {
        match mu {
            1 => Some(Self::Dirichlet),
            0 => Some(Self::Neumann),
            _ => None,
        }
    }
}

/// Which boundary measurement at `x = 0` drives the inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlKind {
    /// The flux `q0` is measured; the direct problem uses `v(0,t) = p0` and
    /// the inverse data is `g = q0 - v_x(0, .)`.
    Neumann,
    /// The displacement `p0` is measured; the direct problem uses
    /// `v_x(0,t) = q0` and the inverse data is `h = p0 - v(0, .)`.
    Dirichlet,
}

impl fmt::Display for ControlKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Neumann => "neumann",
            Self::Dirichlet => "dirichlet",
        })
    }
}

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of one variable, either closed form or tabulated.
#[derive(Clone)]
pub enum Profile {
    Closed {
        name: String,
        value: Func,
        derivative: Option<Func>,
    },
    /// Samples `(coordinate, value)` sorted by coordinate; evaluated by linear
    /// interpolation with constant extension outside the table.
    Tabulated(Vec<(f64, f64)>),
}

impl Profile {
    pub fn closed(name: impl Into<String>, value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Closed {
            name: name.into(),
            value: Arc::new(value),
            derivative: None,
        }
    }

    pub fn with_derivative(self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        match self {
            Self::Closed { name, value, .. } => Self::Closed {
                name,
                value,
                derivative: Some(Arc::new(d)),
            },
            other => other,
        }
    }

    pub fn zero() -> Self {
        Self::closed("zero", |_| 0.0).with_derivative(|_| 0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::closed(format!("{c}"), move |_| c).with_derivative(|_| 0.0)
    }

    pub fn tabulated(mut samples: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        if samples.is_empty() {
            return Err(ModelError::InvalidProfile("no samples".into()));
        }
        if samples.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(ModelError::InvalidProfile("non-finite sample".into()));
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ModelError::InvalidProfile("duplicate coordinate".into()));
        }
        Ok(Self::Tabulated(samples))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Closed { value, .. } => value(x),
            Self::Tabulated(s) => interpolate(s, x),
        }
    }

    pub fn sample(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    /// Derivative from the left at `x`: exact when a closed-form derivative is
    /// attached, otherwise a second-order one-sided difference.
    pub fn left_derivative(&self, x: f64) -> f64 {
        match self {
            Self::Closed {
                derivative: Some(d), ..
            } => d(x),
            Self::Closed { value, .. } => {
                let h = 1e-4 * x.abs().max(1.0);
                (3.0 * value(x) - 4.0 * value(x - h) + value(x - 2.0 * h)) / (2.0 * h)
            }
            Self::Tabulated(s) => tabulated_left_derivative(s, x),
        }
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Closed { name, .. } => write!(f, "Closed({name})"),
            Self::Tabulated(s) => write!(f, "Tabulated({} samples)", s.len()),
        }
    }
}

fn interpolate(s: &[(f64, f64)], x: f64) -> f64 {
    let first = s[0];
    let last = s[s.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let i = s.partition_point(|p| p.0 <= x);
    let (x0, y0) = s[i - 1];
    let (x1, y1) = s[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

// Three-point one-sided formula on the (possibly non-uniform) samples at or
// to the left of `x`.
fn tabulated_left_derivative(s: &[(f64, f64)], x: f64) -> f64 {
    let end = s.partition_point(|p| p.0 <= x);
    match end {
        0 | 1 => {
            if s.len() >= 2 {
                (s[1].1 - s[0].1) / (s[1].0 - s[0].0)
            } else {
                0.0
            }
        }
        2 => (s[1].1 - s[0].1) / (s[1].0 - s[0].0),
        _ => {
            let (x2, y2) = s[end - 1];
            let (x1, y1) = s[end - 2];
            let (x0, y0) = s[end - 3];
            let h1 = x2 - x1;
            let h0 = x1 - x0;
            // Derivative at x2 of the quadratic through the three points.
            y2 * (2.0 * h1 + h0) / (h1 * (h1 + h0)) - y1 * (h1 + h0) / (h1 * h0) + y0 * h1 / (h0 * (h1 + h0))
        }
    }
}

/// Full definition of the direct/inverse problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub wave_speed: f64,
    pub length: f64,
    pub horizon: f64,
    /// Condition at `x = L`.
    pub boundary_kind: BoundaryKind,
    /// `u0(x)`.
    pub initial_displacement: Profile,
    /// `v0(x)`.
    pub initial_velocity: Profile,
    /// `p0(t)`, the displacement at `x = 0`.
    pub left_dirichlet: Profile,
    /// `p_L(t)`, displacement or flux at `x = L` depending on `boundary_kind`.
    pub right_data: Profile,
    /// `q0(t)`, the flux at `x = 0`.
    pub measured_flux: Profile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NonPositiveWaveSpeed,
    NonPositiveLength,
    NonPositiveHorizon,
    LeftCompatibility,
    RightCompatibility,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Measured discrepancy (absolute difference, or the offending value).
    pub discrepancy: f64,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl ProblemSpec {
    /// Returns every violated invariant; an empty list means the spec is valid.
    pub fn validate(&self) -> Vec<Violation> {
        validate(self, tol::COMPATIBILITY)
    }

    /// `u0'(L)`.
    pub fn initial_slope_at_right(&self) -> f64 {
        self.initial_displacement.left_derivative(self.length)
    }
}

fn compatible(a: f64, b: f64, rel_tol: f64) -> bool {
    (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0)
}

/// Checks positivity of `c`, `L`, `T` and the compatibility conditions
/// `p0(0) = u0(0)`, `p_L(0) = mu u0(L) + (1 - mu) u0'(L)`.
pub fn validate(spec: &ProblemSpec, rel_tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let positive = [
        (spec.wave_speed, ViolationKind::NonPositiveWaveSpeed, "wave speed c"),
        (spec.length, ViolationKind::NonPositiveLength, "length L"),
        (spec.horizon, ViolationKind::NonPositiveHorizon, "horizon T"),
    ];
    for (value, kind, what) in positive {
        if !(value > 0.0 && value.is_finite()) {
            out.push(Violation {
                kind,
                discrepancy: value,
                message: format!("{what} must be positive and finite, got {value}"),
            });
        }
    }

    let p0 = spec.left_dirichlet.eval(0.0);
    let u0 = spec.initial_displacement.eval(0.0);
    if !compatible(p0, u0, rel_tol) {
        out.push(Violation {
            kind: ViolationKind::LeftCompatibility,
            discrepancy: (p0 - u0).abs(),
            message: format!("left compatibility p0(0) = u0(0) violated: {p0} vs {u0}"),
        });
    }

    if spec.length > 0.0 && spec.length.is_finite() {
        let pl = spec.right_data.eval(0.0);
        let (expected, what) = match spec.boundary_kind {
            BoundaryKind::Dirichlet => (spec.initial_displacement.eval(spec.length), "u0(L)"),
            BoundaryKind::Neumann => (spec.initial_slope_at_right(), "u0'(L)"),
        };
        if !compatible(pl, expected, rel_tol) {
            out.push(Violation {
                kind: ViolationKind::RightCompatibility,
                discrepancy: (pl - expected).abs(),
                message: format!("right compatibility pL(0) = {what} violated: {pl} vs {expected}"),
            });
        }
    }
    out
}

/// Uniform space-time discretisation: `N` time elements on `[0, T]` and `M`
/// space cells on `[0, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n_time: usize,
    pub n_space: usize,
    pub dt: f64,
    pub dx: f64,
    pub wave_speed: f64,
    pub length: f64,
    pub horizon: f64,
}

impl Grid {
    pub fn new(spec: &ProblemSpec, n_time: usize, n_space: usize) -> Result<Self, ModelError> {
        Self::from_dimensions(spec.wave_speed, spec.length, spec.horizon, n_time, n_space)
    }

    pub fn from_dimensions(
        wave_speed: f64,
        length: f64,
        horizon: f64,
        n_time: usize,
        n_space: usize,
    ) -> Result<Self, ModelError> {
        if n_time == 0 || n_space == 0 {
            return Err(ModelError::InvalidGrid(format!(
                "N and M must be at least 1 (got N={n_time}, M={n_space})"
            )));
        }
        for (v, name) in [(wave_speed, "c"), (length, "L"), (horizon, "T")] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ModelError::InvalidGrid(format!("{name} must be positive, got {v}")));
            }
        }
        let grid = Self {
            n_time,
            n_space,
            dt: horizon / n_time as f64,
            dx: length / n_space as f64,
            wave_speed,
            length,
            horizon,
        };
        if (grid.courant() - 1.0).abs() > tol::COURANT {
            log::warn!(
                "Courant number c*dt/dx = {:.6} differs from 1; the grid does not follow the characteristics",
                grid.courant()
            );
        }
        Ok(grid)
    }

    /// Grid with `M` chosen so that `c dt / dx` is as close to 1 as possible.
    pub fn matched(spec: &ProblemSpec, n_time: usize) -> Result<Self, ModelError> {
        let m = (n_time as f64 * spec.length / (spec.wave_speed * spec.horizon)).round() as usize;
        Self::new(spec, n_time, m.max(1))
    }

    pub fn courant(&self) -> f64 {
        self.wave_speed * self.dt / self.dx
    }

    /// `t_n = n T / N`.
    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.horizon / self.n_time as f64
    }

    /// `x_i = i L / M`.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.length / self.n_space as f64
    }

    /// `t_1, ..., t_N`.
    pub fn times(&self) -> Vec<f64> {
        (1..=self.n_time).map(|n| self.t(n)).collect()
    }

    /// `x_1, ..., x_M`.
    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.n_space).map(|i| self.x(i)).collect()
    }
}

/// Values of a scalar field on the tensor grid `xs x ts`, stored time-major:
/// `values[it * xs.len() + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn from_fn(xs: &[f64], ts: &[f64], mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(xs.len() * ts.len());
        for &t in ts {
            for &x in xs {
                values.push(f(x, t));
            }
        }
        Self {
            xs: xs.to_vec(),
            ts: ts.to_vec(),
            values,
        }
    }

    pub fn zeros(xs: &[f64], ts: &[f64]) -> Self {
        Self::from_fn(xs, ts, |_, _| 0.0)
    }

    pub fn get(&self, ix: usize, it: usize) -> f64 {
        self.values[it * self.xs.len() + ix]
    }

    /// `(x, t, value)` triples in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let nx = self.xs.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.xs[k % nx], self.ts[k / nx], v))
    }

    pub fn max_abs_diff(&self, other: &SampledField) -> Result<f64, ModelError> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    fn check_same_grid(&self, other: &SampledField) -> Result<(), ModelError> {
        if self.xs != other.xs || self.ts != other.ts || self.values.len() != other.values.len() {
            return Err(ModelError::GridMismatch(format!(
                "{}x{} field vs {}x{} field (or different coordinates)",
                self.xs.len(),
                self.ts.len(),
                other.xs.len(),
                other.ts.len()
            )));
        }
        Ok(())
    }
}

/// `u = v + w` on a common grid.
pub fn superpose(v: &SampledField, w: &SampledField) -> Result<SampledField, ModelError> {
    v.check_same_grid(w)?;
    Ok(SampledField {
        xs: v.xs.clone(),
        ts: v.ts.clone(),
        values: v.values.iter().zip(&w.values).map(|(a, b)| a + b).collect(),
    })
}
