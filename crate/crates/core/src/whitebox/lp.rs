//! LPs as the diagonal case of the dual SDP.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::dual::{solve_dual, DualCertificate, DualObjective, DualSet, QueryMeter};
use super::sdp::SdpInstance;
use crate::error::{check_finite, check_len, Error, Result};
use crate::solvers::RunTrace;

/// max cᵀx s.t. 1ᵀx = r_p, Ax ≤ b, x ≥ 0, with A ∈ [−1, 1]^{m×n}.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    pub m: usize,
    pub n: usize,
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub r_p: f64,
    pub r_d: f64,
}

impl LpInstance {
    pub fn new(a: DMatrix<f64>, b: Vec<f64>, c: Vec<f64>, r_p: f64, r_d: f64) -> Result<Self> {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("an LP needs at least one row and one column".into()));
        }
        check_len(m, b.len())?;
        check_len(n, c.len())?;
        check_finite(a.as_slice(), "A")?;
        check_finite(&b, "b")?;
        check_finite(&c, "c")?;
        if a.iter().any(|v| v.abs() > 1.0) {
            return Err(Error::InvalidInput("A has entries outside [-1, 1]".into()));
        }
        if !(r_p >= 1.0 && r_p.is_finite()) || !(r_d >= 1.0 && r_d.is_finite()) {
            return Err(Error::InvalidInput(format!("r_p = {r_p} and r_d = {r_d} must be finite and >= 1")));
        }
        let bmax = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if bmax > r_p {
            return Err(Error::InvalidInput(format!("‖b‖∞ = {bmax} exceeds r_p = {r_p}")));
        }
        Ok(LpInstance { m, n, a, b, c, r_p, r_d })
    }

    /// The diagonal SDP with C = diag(c) and Aᵢ = diag(row i of A).
    pub fn to_sdp(&self) -> Result<SdpInstance> {
        let c = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.c));
        let a = (0..self.m)
            .map(|i| DMatrix::from_diagonal(&self.a.row(i).transpose()))
            .collect();
        SdpInstance::new(a, self.b.clone(), c, self.r_p, self.r_d)
    }

    /// The slack vector y₀1 + Aᵀy − c.
    pub fn slack(&self, y0: f64, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| y0 + self.a.column(j).iter().zip(y).map(|(a, v)| a * v).sum::<f64>() - self.c[j])
            .collect()
    }

    fn lipschitz(&self) -> f64 {
        let amax = self.a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let bmax = self.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) / self.r_p;
        amax + bmax
    }
}

/// max_j {c_j/r_d − ⟨A_j, y⟩} + b̃ᵀy and the lowest maximizing column.
/// The column maximum stands in for quantum minimum finding: the meter is
/// charged ⌈√n⌉ queries alongside the n scans actually made.
pub fn lp_objective(inst: &LpInstance, y: &[f64], meter: Option<&QueryMeter>) -> Result<(f64, usize)> {
    check_len(inst.m, y.len())?;
    if y.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::Domain("lp_objective needs y >= 0".into()));
    }
    Ok(lp_value(inst, y, meter))
}

fn lp_value(inst: &LpInstance, y: &[f64], meter: Option<&QueryMeter>) -> (f64, usize) {
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for j in 0..inst.n {
        let v = inst.c[j] / inst.r_d - inst.a.column(j).iter().zip(y).map(|(a, v)| a * v).sum::<f64>();
        if v > best {
            best = v;
            arg = j;
        }
    }
    if let Some(m) = meter {
        m.charge((inst.n as f64).sqrt().ceil() as u64, inst.n as u64);
    }
    let lin: f64 = inst.b.iter().zip(y).map(|(b, v)| b / inst.r_p * v).sum();
    (best + lin, arg)
}

struct LpDual {
    inst: LpInstance,
    meter: Arc<QueryMeter>,
}

impl DualObjective for LpDual {
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
        lp_value(&self.inst, y_tilde, Some(&self.meter)).0
    }

    fn lipschitz(&self) -> f64 {
        self.inst.lipschitz()
    }

    fn certificate(&self, y: &[f64]) -> Result<(f64, f64, f64)> {
        let y0 = -(0..self.inst.n)
            .map(|j| self.inst.a.column(j).iter().zip(y).map(|(a, v)| a * v).sum::<f64>() - self.inst.c[j])
            .fold(f64::INFINITY, f64::min);
        let min_slack = self.inst.slack(y0, y).into_iter().fold(f64::INFINITY, f64::min);
        let objective = self.inst.r_p * y0 + self.inst.b.iter().zip(y).map(|(b, v)| b * v).sum::<f64>();
        Ok((y0, objective, min_slack))
    }
}

pub(crate) fn solve_lp_on(
    inst: &LpInstance,
    epsilon: f64,
    theta: f64,
    seed: u64,
    set: DualSet,
) -> Result<(DualCertificate, RunTrace)> {
    let meter = Arc::new(QueryMeter::default());
    let problem = Arc::new(LpDual {
        inst: inst.clone(),
        meter: Arc::clone(&meter),
    });
    let run = solve_dual(problem, epsilon, theta, seed, set, Some(meter))?;
    Ok((run.certificate, run.trace))
}

/// Solves the dual LP min r_p·y₀ + bᵀy s.t. y₀1 + Aᵀy ≥ c, y ≥ 0 to
/// accuracy ε; the certificate's slack is min_j (y₀1 + Aᵀy − c)_j.
pub fn solve_lp(inst: &LpInstance, epsilon: f64, theta: f64, seed: u64) -> Result<(DualCertificate, RunTrace)> {
    solve_lp_on(inst, epsilon, theta, seed, DualSet::Capped)
}
