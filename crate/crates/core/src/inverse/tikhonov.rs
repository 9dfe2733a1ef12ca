use super::{DesignMatrix, InverseError};
use crate::linalg::{norm2, solve_spd, DenseMatrix, LinalgError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegularizationOrder {
    /// Penalise `||b||^2`.
    #[default]
    Zeroth,
    /// Penalise `sum (b_{k+1} - b_k)^2`.
    First,
    /// Penalise `sum (b_{k+2} - 2 b_{k+1} + b_k)^2`.
    Second,
}

impl RegularizationOrder {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(Self::Zeroth),
            1 => Some(Self::First),
            2 => Some(Self::Second),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::Zeroth => 0,
            Self::First => 1,
            Self::Second => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RegularizationConfig {
    pub lambda: f64,
    pub order: RegularizationOrder,
}

impl RegularizationConfig {
    pub fn zeroth(lambda: f64) -> Self {
        Self {
            lambda,
            order: RegularizationOrder::Zeroth,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedSolution {
    pub b: Vec<f64>,
    /// `||Q b - data||`
    pub residual_norm: f64,
    /// `||b||`
    pub solution_norm: f64,
    /// `||R b||`; equals `solution_norm` for zeroth order.
    pub penalty_norm: f64,
    pub config: RegularizationConfig,
}

/// Difference operator `R` for a penalty order: identity, `(K-1) x K` forward
/// differences or `(K-2) x K` second differences. Returns a `0 x K` matrix
/// when `K` is too small for the stencil.
pub fn difference_operator(order: RegularizationOrder, modes: usize) -> DenseMatrix {
    match order {
        RegularizationOrder::Zeroth => DenseMatrix::identity(modes),
        RegularizationOrder::First => {
            let rows = modes.saturating_sub(1);
            DenseMatrix::from_fn(rows, modes, |i, j| {
                if j == i {
                    -1.0
                } else if j == i + 1 {
                    1.0
                } else {
                    0.0
                }
            })
        }
        RegularizationOrder::Second => {
            let rows = modes.saturating_sub(2);
            DenseMatrix::from_fn(rows, modes, |i, j| {
                if j == i || j == i + 2 {
                    1.0
                } else if j == i + 1 {
                    -2.0
                } else {
                    0.0
                }
            })
        }
    }
}

/// Minimises `||Q b - data||^2 + lambda ||R b||^2` through the normal equations
/// `(Q^T Q + lambda R^T R) b = Q^T data`, factorised by Cholesky.
pub fn tikhonov_solve(
    q: &DesignMatrix,
    data: &[f64],
    config: RegularizationConfig,
) -> Result<RegularizedSolution, InverseError> {
    let lambda = config.lambda;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(InverseError::InvalidLambda(format!(
            "lambda must be >= 0, got {lambda}"
        )));
    }
    if data.len() != q.rows() {
        return Err(InverseError::DimensionMismatch(format!(
            "{} data samples for a {}-row design matrix",
            data.len(),
            q.rows()
        )));
    }
    let k = q.modes();
    let r = difference_operator(config.order, k);
    let mut normal = q.entries.gram();
    if lambda > 0.0 && r.rows() > 0 {
        normal.add_scaled(lambda, &r.gram())?;
    }
    let rhs = q.entries.tr_mul_vec(data)?;
    let b = match solve_spd(&normal, &rhs) {
        Ok(b) => b,
        Err(LinalgError::NotPositiveDefinite { .. }) => {
            return Err(InverseError::SingularNormalEquations { lambda });
        }
        Err(e) => return Err(e.into()),
    };

    let fitted = q.entries.mul_vec(&b)?;
    let residual: Vec<f64> = fitted.iter().zip(data).map(|(f, d)| f - d).collect();
    let penalty_norm = if r.rows() == 0 { 0.0 } else { norm2(&r.mul_vec(&b)?) };
    Ok(RegularizedSolution {
        residual_norm: norm2(&residual),
        solution_norm: norm2(&b),
        penalty_norm,
        b,
        config,
    })
}
