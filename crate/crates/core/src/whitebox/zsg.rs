//! Zero-sum matrix games via two LP solves.

use nalgebra::DMatrix;

use super::dual::DualSet;
use super::lp::{solve_lp_on, LpInstance};
use crate::error::{check_finite, Error, Result};
use crate::par::{self, Execution};
use crate::solvers::RunTrace;

/// Payoff matrix A ∈ [−1, 1]^{m×n}; the game is min_{x∈Δⁿ} max_{y∈Δᵐ} yᵀAx.
#[derive(Debug, Clone, PartialEq)]
pub struct ZsgInstance {
    pub a: DMatrix<f64>,
}

impl ZsgInstance {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::InvalidInput("payoff matrix is empty".into()));
        }
        check_finite(a.as_slice(), "payoff matrix")?;
        if a.iter().any(|v| v.abs() > 1.0) {
            return Err(Error::InvalidInput("payoff entries must lie in [-1, 1]".into()));
        }
        Ok(ZsgInstance { a })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("payoff rows have different lengths".into()));
        }
        Self::new(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
    }

    pub fn matching_pennies() -> Self {
        Self::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).expect("valid")
    }

    pub fn rock_paper_scissors() -> Self {
        Self::from_rows(&[vec![0.0, -1.0, 1.0], vec![1.0, 0.0, -1.0], vec![-1.0, 1.0, 0.0]]).expect("valid")
    }

    /// max_i (Ax)_i: the best row response to x.
    pub fn row_best_response(&self, x: &[f64]) -> f64 {
        (&self.a * nalgebra::DVector::from_column_slice(x)).max()
    }

    /// min_j (Aᵀy)_j: the best column response to y.
    pub fn column_best_response(&self, y: &[f64]) -> f64 {
        (self.a.transpose() * nalgebra::DVector::from_column_slice(y)).min()
    }
}

#[derive(Debug, Clone)]
pub struct ZsgSolution {
    /// Midpoint of the certified bracket [lower, upper].
    pub value: f64,
    /// Minimizing (column) strategy in Δⁿ.
    pub x: Vec<f64>,
    /// Maximizing (row) strategy in Δᵐ.
    pub y: Vec<f64>,
    /// min_j (Aᵀy)_j ≤ value(A).
    pub lower: f64,
    /// max_i (Ax)_i ≥ value(A).
    pub upper: f64,
    /// Traces of the row-side and column-side solves.
    pub traces: [RunTrace; 2],
}

/// Solves the LP with A for the row player and the LP with −Aᵀ for the
/// column player, on the exact simplex with c = 0, b = 0, r_p = r_d = 1.
pub fn solve_zsg(inst: &ZsgInstance, epsilon: f64, theta: f64, seed: u64) -> Result<ZsgSolution> {
    solve_zsg_with(inst, epsilon, theta, seed, Execution::default())
}

pub fn solve_zsg_with(
    inst: &ZsgInstance,
    epsilon: f64,
    theta: f64,
    seed: u64,
    exec: Execution,
) -> Result<ZsgSolution> {
    let (m, n) = inst.a.shape();
    let row_lp = LpInstance::new(inst.a.clone(), vec![0.0; m], vec![0.0; n], 1.0, 1.0)?;
    let col_lp = LpInstance::new(-inst.a.transpose(), vec![0.0; n], vec![0.0; m], 1.0, 1.0)?;
    let lps = [row_lp, col_lp];
    let mut runs = par::try_map_range(exec, 2, |k| {
        solve_lp_on(&lps[k], epsilon, theta, seed.wrapping_add(k as u64), DualSet::Simplex)
    })?;
    let (col_cert, col_trace) = runs.pop().expect("two solves");
    let (row_cert, row_trace) = runs.pop().expect("two solves");
    let y = row_cert.y;
    let x = col_cert.y;
    let lower = inst.column_best_response(&y);
    let upper = inst.row_best_response(&x);
    Ok(ZsgSolution {
        value: 0.5 * (lower + upper),
        x,
        y,
        lower,
        upper,
        traces: [row_trace, col_trace],
    })
}
