//! L-curve: residual norm against solution norm over a range of `lambda`,
//! with the corner picked automatically by discrete curvature.

use super::{tikhonov_solve, DesignMatrix, InverseError, RegularizationConfig, RegularizationOrder};
use crate::tol;

/// Sample values used when the corner is chosen by eye, ascending.
pub const SURVEY_LAMBDAS: [f64; 17] = [
    1e-3, 1e-2, 2e-2, 4e-2, 5e-2, 6e-2, 8e-2, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0,
];

/// 40 log-spaced values in `[1e-6, 1e1]`.
pub fn default_lambda_grid() -> Vec<f64> {
    let (lo, hi, n) = (-6.0_f64, 1.0_f64, 40);
    (0..n)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LCurvePoint {
    pub lambda: f64,
    pub residual_norm: f64,
    pub solution_norm: f64,
    pub penalty_norm: f64,
    /// Signed curvature of the normalised log-log curve; `None` at points
    /// dropped by the spacing filter and at the two ends.
    pub curvature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LCurve {
    pub points: Vec<LCurvePoint>,
    /// Index into `points` of the corner.
    pub corner: usize,
    /// Fewer than three usable points: the corner is a fallback, not a maximum.
    pub degenerate: bool,
}

impl LCurve {
    pub fn corner_lambda(&self) -> f64 {
        self.points[self.corner].lambda
    }
}

pub fn lcurve(
    q: &DesignMatrix,
    data: &[f64],
    lambdas: &[f64],
    order: RegularizationOrder,
) -> Result<LCurve, InverseError> {
    if lambdas.is_empty() {
        return Err(InverseError::InvalidLambda("empty lambda grid".into()));
    }
    if lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(InverseError::InvalidLambda("L-curve values must be positive".into()));
    }
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(InverseError::InvalidLambda(
            "L-curve values must be strictly ascending".into(),
        ));
    }

    let mut points = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let s = tikhonov_solve(q, data, RegularizationConfig { lambda, order })?;
        points.push(LCurvePoint {
            lambda,
            residual_norm: s.residual_norm,
            solution_norm: s.solution_norm,
            penalty_norm: s.penalty_norm,
            curvature: None,
        });
    }
    let (corner, degenerate) = locate_corner(&mut points);
    if degenerate {
        log::warn!(
            "L-curve has fewer than three distinct points; returning lambda = {:e} without curvature",
            points[corner].lambda
        );
    }
    Ok(LCurve {
        points,
        corner,
        degenerate,
    })
}

/// Fills in curvatures and returns `(corner index, degenerate)`.
///
/// Both log axes are rescaled to `[0, 1]` so that the curvature does not
/// depend on the units of `b`. Points closer than a fixed fraction of the box
/// diagonal to the previously kept point are skipped: near both ends the curve
/// bunches up and three almost coincident points give meaningless curvature.
fn locate_corner(points: &mut [LCurvePoint]) -> (usize, bool) {
    let floor = f64::MIN_POSITIVE;
    let xs: Vec<f64> = points.iter().map(|p| p.residual_norm.max(floor).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.solution_norm.max(floor).ln()).collect();
    let unit = |v: &[f64]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        v.iter().map(|x| (x - lo) / span).collect::<Vec<_>>()
    };
    let (xs, ys) = (unit(&xs), unit(&ys));
    let diag = {
        let w = xs.iter().cloned().fold(0.0, f64::max) - xs.iter().cloned().fold(1.0, f64::min);
        let h = ys.iter().cloned().fold(0.0, f64::max) - ys.iter().cloned().fold(1.0, f64::min);
        w.hypot(h)
    };

    let mut kept = vec![0];
    for i in 1..points.len() {
        let last = *kept.last().expect("non-empty");
        if (xs[i] - xs[last]).hypot(ys[i] - ys[last]) > tol::LCURVE_MIN_SPACING * diag {
            kept.push(i);
        }
    }
    if kept.len() < 3 {
        return (kept[kept.len() / 2], true);
    }

    let mut best = (kept[1], f64::NEG_INFINITY);
    for w in kept.windows(3) {
        let (i1, i2, i3) = (w[0], w[1], w[2]);
        let (x1, y1, x2, y2, x3, y3) = (xs[i1], ys[i1], xs[i2], ys[i2], xs[i3], ys[i3]);
        let a = (x2 - x1).hypot(y2 - y1);
        let b = (x3 - x2).hypot(y3 - y2);
        let c = (x3 - x1).hypot(y3 - y1);
        let cross = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1);
        let kappa = 2.0 * cross / (a * b * c);
        points[i2].curvature = Some(kappa);
        if kappa > best.1 {
            best = (i2, kappa);
        }
    }
    (best.0, false)
}
