//! Dual SDP solving via λmax minimization.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::dual::{solve_dual, DualCertificate, DualObjective, DualSet, FeasibilityReport};
use crate::error::{check_finite, check_len, Error, Result};
use crate::geometry::linalg::{lambda_max, lambda_min, op_norm};
use crate::solvers::RunTrace;

const SYMMETRY_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-12;
const SIMPLEX_TOL: f64 = 1e-10;

/// sup tr(CX) s.t. tr X = r_p, tr(AᵢX) ≤ bᵢ, X ⪰ 0, with
/// ‖Aᵢ‖op, ‖C‖op ≤ 1 and ‖b‖∞ ≤ r_p.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpInstance {
    pub m: usize,
    pub n: usize,
    pub a: Vec<DMatrix<f64>>,
    pub b: Vec<f64>,
    pub c: DMatrix<f64>,
    pub r_p: f64,
    pub r_d: f64,
    /// Maximum nonzeros in any row over C and the Aᵢ.
    pub s: usize,
}

fn check_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidInput(format!("{what} is {}x{}, not square", n, m.ncols())));
    }
    check_finite(m.as_slice(), what)?;
    for i in 0..n {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL {
                return Err(Error::InvalidInput(format!("{what} is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

impl SdpInstance {
    pub fn new(a: Vec<DMatrix<f64>>, b: Vec<f64>, c: DMatrix<f64>, r_p: f64, r_d: f64) -> Result<Self> {
        let m = a.len();
        if m == 0 {
            return Err(Error::InvalidInput("an SDP needs at least one constraint".into()));
        }
        check_len(m, b.len())?;
        check_finite(&b, "b")?;
        if !(r_p >= 1.0 && r_p.is_finite()) || !(r_d >= 1.0 && r_d.is_finite()) {
            return Err(Error::InvalidInput(format!("r_p = {r_p} and r_d = {r_d} must be finite and >= 1")));
        }
        let n = c.nrows();
        check_symmetric(&c, "C")?;
        if op_norm(&c)? > 1.0 + NORM_TOL {
            return Err(Error::InvalidInput("‖C‖op exceeds 1".into()));
        }
        for (i, ai) in a.iter().enumerate() {
            check_len(n, ai.nrows())?;
            check_symmetric(ai, &format!("A{}", i + 1))?;
            if op_norm(ai)? > 1.0 + NORM_TOL {
                return Err(Error::InvalidInput(format!("‖A{}‖op exceeds 1", i + 1)));
            }
        }
        let bmax = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if bmax > r_p {
            return Err(Error::InvalidInput(format!("‖b‖∞ = {bmax} exceeds r_p = {r_p}")));
        }
        let row_nnz = |mat: &DMatrix<f64>| {
            (0..n)
                .map(|i| (0..n).filter(|&j| mat[(i, j)] != 0.0).count())
                .max()
                .unwrap_or(0)
        };
        let s = a.iter().map(row_nnz).chain([row_nnz(&c)]).max().unwrap_or(0);
        Ok(SdpInstance {
            m,
            n,
            a,
            b,
            c,
            r_p,
            r_d,
            s,
        })
    }

    /// b̃ = b / r_p.
    pub fn b_tilde(&self) -> Vec<f64> {
        self.b.iter().map(|v| v / self.r_p).collect()
    }

    /// Σ yᵢAᵢ.
    pub fn combine(&self, y: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (yi, ai) in y.iter().zip(&self.a) {
            if *yi != 0.0 {
                out += ai * *yi;
            }
        }
        out
    }

    /// The slack matrix y₀I + Σ yᵢAᵢ − C.
    pub fn slack(&self, y0: f64, y: &[f64]) -> DMatrix<f64> {
        let mut s = self.combine(y) - &self.c;
        for i in 0..self.n {
            s[(i, i)] += y0;
        }
        s
    }

    /// ℓ1-Lipschitz constant of the normalized objective: max‖Aᵢ‖op + ‖b̃‖∞.
    pub fn lipschitz(&self) -> Result<f64> {
        let mut amax = 0.0f64;
        for ai in &self.a {
            amax = amax.max(op_norm(ai)?);
        }
        let bmax = self.b_tilde().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        Ok(amax + bmax)
    }
}

/// λmax(C/r_d − Σ yᵢAᵢ) + b̃ᵀy at any y, without domain checks.
pub fn eigen_objective(c: &DMatrix<f64>, a: &[DMatrix<f64>], b_tilde: &[f64], r_d: f64, y: &[f64]) -> Result<f64> {
    check_len(a.len(), y.len())?;
    check_len(a.len(), b_tilde.len())?;
    let mut m = c / r_d;
    for (yi, ai) in y.iter().zip(a) {
        if *yi != 0.0 {
            m -= ai * *yi;
        }
    }
    let lin: f64 = b_tilde.iter().zip(y).map(|(b, v)| b * v).sum();
    Ok(lambda_max(&m)? + lin)
}

/// The normalized dual objective at ỹ ∈ {ỹ ≥ 0, Σỹ ≤ 1}.
pub fn sdp_eig_objective(inst: &SdpInstance, y_tilde: &[f64]) -> Result<f64> {
    check_len(inst.m, y_tilde.len())?;
    check_finite(y_tilde, "y_tilde")?;
    let total: f64 = y_tilde.iter().sum();
    if y_tilde.iter().any(|&v| v < -SIMPLEX_TOL) || total > 1.0 + SIMPLEX_TOL {
        return Err(Error::Domain(format!("y_tilde (sum {total}) is outside the capped simplex")));
    }
    eigen_objective(&inst.c, &inst.a, &inst.b_tilde(), inst.r_d, y_tilde)
}

struct SdpDual {
    inst: SdpInstance,
    b_tilde: Vec<f64>,
    lipschitz: f64,
}

impl DualObjective for SdpDual {
    fn m(&self) -> usize {
        self.inst.m
    }

    fn r_p(&self) -> f64 {
        self.inst.r_p
    }

    fn r_d(&self) -> f64 {
        self.inst.r_d
    }

    fn value(&self, y_tilde: &[f64]) -> f64 {
        eigen_objective(&self.inst.c, &self.inst.a, &self.b_tilde, self.inst.r_d, y_tilde).unwrap_or(f64::NAN)
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn certificate(&self, y: &[f64]) -> Result<(f64, f64, f64)> {
        let shifted = self.inst.combine(y) - &self.inst.c;
        let y0 = -lambda_min(&shifted)?;
        let min_slack = lambda_min(&self.inst.slack(y0, y))?;
        let objective = self.inst.r_p * y0 + self.inst.b.iter().zip(y).map(|(b, v)| b * v).sum::<f64>();
        Ok((y0, objective, min_slack))
    }
}

/// Runs mirror descent on the normalized objective over the capped simplex
/// (one slack coordinate) with target accuracy ε/(r_p·r_d) and extracts
/// y = r_d·ỹ, y₀ = −λmin(Σ yᵢAᵢ − C).
pub fn solve_sdp_dual(inst: &SdpInstance, epsilon: f64, theta: f64, seed: u64) -> Result<(DualCertificate, RunTrace)> {
    let lipschitz = inst.lipschitz()?;
    let problem = Arc::new(SdpDual {
        b_tilde: inst.b_tilde(),
        inst: inst.clone(),
        lipschitz,
    });
    let run = solve_dual(problem, epsilon, theta, seed, DualSet::Capped, None)?;
    Ok((run.certificate, run.trace))
}

/// Recomputes the slack spectrum and sign conditions of a certificate.
pub fn check_dual_feasibility(inst: &SdpInstance, cert: &DualCertificate, tol: f64) -> Result<FeasibilityReport> {
    check_len(inst.m, cert.y.len())?;
    let min_y = cert.y.iter().copied().fold(f64::INFINITY, f64::min);
    let min_slack_eig = lambda_min(&inst.slack(cert.y0, &cert.y))?;
    let objective = inst.r_p * cert.y0 + DVector::from_column_slice(&inst.b).dot(&DVector::from_column_slice(&cert.y));
    Ok(FeasibilityReport {
        nonnegative: min_y >= 0.0,
        min_y,
        slack_ok: min_slack_eig >= -tol,
        min_slack_eig,
        objective,
    })
}
