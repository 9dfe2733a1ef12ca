//! Numerical tolerances shared by the solvers and the test suites.
//!
//! Every threshold the library uses to decide "singular", "converged" or
//! "compatible" lives here so the acceptance suite can quote the same value
//! the implementation uses.

/// Relative tolerance for the compatibility conditions on the boundary and
/// initial data (`p0(0) = u0(0)` and the right-end counterpart).
pub const COMPATIBILITY: f64 = 1e-10;

/// Relative size below which a per-step Cramer denominator is treated as zero:
/// `|den| < STEP_SINGULAR * max(A^2, 1)`.
pub const STEP_SINGULAR: f64 = 1e-14;

/// A pivot whose magnitude falls below `PIVOT * max|a_ij|` stops Gaussian
/// elimination with a singular-matrix error.
pub const PIVOT: f64 = 1e-14;

/// Maximum number of one-sided Jacobi sweeps.
pub const SVD_MAX_SWEEPS: usize = 60;

/// Off-diagonal convergence threshold of the Jacobi SVD, relative to the
/// column norms involved in a rotation.
pub const SVD_OFF_DIAGONAL: f64 = 1e-14;

/// Snapping distance, in units of the cell width, used when deciding whether
/// a coordinate sits exactly on a grid node.
pub const GRID_SNAP: f64 = 1e-9;

/// Deviation of the Courant number from 1 that triggers a warning.
pub const COURANT: f64 = 1e-9;

/// Minimum spacing between retained L-curve points, as a fraction of the
/// diagonal of the normalised log-log bounding box.
pub const LCURVE_MIN_SPACING: f64 = 1e-2;
