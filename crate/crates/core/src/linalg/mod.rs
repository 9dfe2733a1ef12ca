//! Small dense linear algebra kernel.
//!
//! The matrices in this crate are at most a few hundred rows (the global BEM
//! system is `2N x 2N`, the design matrix `N x K`), so everything is a plain
//! row-major `Vec<f64>` with straightforward O(n^3) algorithms.

mod matrix;
mod solve;
mod svd;

pub use matrix::DenseMatrix;
pub use solve::{solve_ge, solve_spd};
pub use svd::{svd, Svd};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is singular at pivot {pivot} (condition estimate {condition_estimate:.3e})")]
    Singular { pivot: usize, condition_estimate: f64 },

    #[error("matrix is not positive definite (pivot {pivot} = {value:.3e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("SVD did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix has no entries")]
    Empty,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
