//! Reconstruction of a space-dependent force on a vibrating string from
//! boundary measurements.
//!
//! The displacement `u` of `u_tt = c^2 u_xx + f(x)` is split as `u = v + w`:
//! `v` carries the initial and boundary data with no force and is computed by
//! the boundary element method ([`bem`]); `w` starts from rest and carries the
//! force, expanded in an eigenfunction series whose coefficients are fitted to
//! the extra boundary measurement by Tikhonov regularisation ([`inverse`]).
//!
//! ```
//! use stringforce::{benchmark, bem::DirectMethod, inverse::RegularizationConfig, model::Grid, pipeline::Inversion};
//!
//! let b = benchmark::sine();
//! let grid = Grid::new(&b.spec, 40, 40).unwrap();
//! let inv = Inversion::prepare(&b.spec, b.control, &grid, 10, None, DirectMethod::Marching).unwrap();
//! let sol = inv.solve(RegularizationConfig::zeroth(1e-3)).unwrap();
//! assert!((sol.b[0] - 7.88).abs() < 0.2);
//! ```

pub mod bem;
pub mod benchmark;
pub mod config;
pub mod inverse;
pub mod linalg;
pub mod model;
pub mod noise;
pub mod pipeline;
pub mod tol;

pub use model::{BoundaryKind, ControlKind, Grid, ProblemSpec, Profile};
