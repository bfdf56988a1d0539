//! Mirror descent on the dual eigenvalue objective, shared by the SDP and
//! LP solvers.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::MirrorGeometry;
use crate::oracle::{NoiseMode, NoisyOracle};
use crate::problem::{DomainSpec, ObjectiveSpec};
use crate::solvers::{qmd_solve, Method, RunTrace, SolverConfig};

/// The feasible set for the normalized dual variable ỹ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualSet {
    /// {ỹ ≥ 0, Σỹ ≤ 1}, realized as a simplex with one slack coordinate.
    Capped,
    /// {ỹ ≥ 0, Σỹ = 1}.
    Simplex,
}

/// Thread-safe counters for data queries made by an objective evaluator.
#[derive(Debug, Default)]
pub struct QueryMeter {
    charged: AtomicU64,
    scans: AtomicU64,
}

impl QueryMeter {
    pub fn charge(&self, charged: u64, scans: u64) {
        self.charged.fetch_add(charged, Ordering::Relaxed);
        self.scans.fetch_add(scans, Ordering::Relaxed);
    }

    pub fn charged(&self) -> u64 {
        self.charged.load(Ordering::Relaxed)
    }

    pub fn scans(&self) -> u64 {
        self.scans.load(Ordering::Relaxed)
    }
}

/// A feasible dual solution (y₀, y) with its objective r_p·y₀ + bᵀy.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub y0: f64,
    pub y: Vec<f64>,
    pub objective: f64,
    /// λmin of the slack y₀I + ΣyᵢAᵢ − C (smallest slack entry for LPs).
    pub min_slack_eig: f64,
    pub charged_queries: u64,
    pub actual_evals: u64,
    /// Data-access queries charged by the objective evaluator.
    pub data_queries: u64,
    pub data_scans: u64,
}

impl DualCertificate {
    /// ‖(y₀, y)‖₁, compared against r_d by the solvers.
    pub fn l1_norm(&self) -> f64 {
        self.y0.abs() + self.y.iter().map(|v| v.abs()).sum::<f64>()
    }

    /// Structured text rendering.
    pub fn to_text(&self) -> String {
        let ys: Vec<String> = self.y.iter().map(|v| format!("{v:.12e}")).collect();
        format!(
            "y0 = {:.12e}\ny = {}\nobjective = {:.12e}\nmin_slack_eig = {:.6e}\ncharged_queries = {}\nactual_evals = {}\ndata_queries = {}\ndata_scans = {}\n",
            self.y0,
            ys.join(" "),
            self.objective,
            self.min_slack_eig,
            self.charged_queries,
            self.actual_evals,
            self.data_queries,
            self.data_scans
        )
    }
}

/// Outcome of re-checking a certificate against its instance.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub nonnegative: bool,
    pub min_y: f64,
    pub slack_ok: bool,
    pub min_slack_eig: f64,
    pub objective: f64,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.nonnegative && self.slack_ok
    }
}

/// The normalized dual objective f(ỹ) of an SDP or LP.
pub(crate) trait DualObjective: Send + Sync + 'static {
    fn m(&self) -> usize;
    fn r_p(&self) -> f64;
    fn r_d(&self) -> f64;
    /// f at any ỹ ∈ ℝ^m.
    fn value(&self, y_tilde: &[f64]) -> f64;
    /// An ℓ1-Lipschitz constant of `value`.
    fn lipschitz(&self) -> f64;
    /// (y₀, objective, min slack) for an unnormalized y ≥ 0.
    fn certificate(&self, y: &[f64]) -> Result<(f64, f64, f64)>;
}

pub(crate) struct DualRun {
    pub certificate: DualCertificate,
    pub trace: RunTrace,
}

/// Smallest Lipschitz constant handed to the solver.
const MIN_LIPSCHITZ: f64 = 1e-3;

/// The mirror-descent θ budget under the entropic setup: μ = 1, K = 2,
/// ϑ* = 1 and ϑ = d.
pub(crate) fn md_theta_budget(eps: f64, g: f64, r: f64, dim: usize, c_theta: f64) -> f64 {
    let d = dim as f64;
    c_theta * eps.powi(5) / (g.powi(4) * r * r * 4.0 * d * d.powi(3))
}

pub(crate) fn solve_dual<P: DualObjective>(
    problem: Arc<P>,
    epsilon: f64,
    theta: f64,
    seed: u64,
    set: DualSet,
    meter: Option<Arc<QueryMeter>>,
) -> Result<DualRun> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    if !(theta >= 0.0) {
        return Err(Error::InvalidInput(format!("theta = {theta} must be >= 0")));
    }
    let m = problem.m();
    let dim = match set {
        DualSet::Capped => m + 1,
        DualSet::Simplex => m,
    };
    let g = problem.lipschitz().max(MIN_LIPSCHITZ);
    let eps_n = epsilon / (problem.r_p() * problem.r_d());
    let r = ((dim as f64).ln()).sqrt().max(f64::MIN_POSITIVE);
    let cfg_base = SolverConfig::new(Method::Qmd).epsilon(eps_n).seed(seed);
    let budget = md_theta_budget(eps_n, g, r, dim, cfg_base.theta_constant);
    let theta_used = theta.min(budget * (1.0 - 1e-9));

    let p = Arc::clone(&problem);
    let spec = ObjectiveSpec::new("dual-eig", dim, g, 1.0, move |z| p.value(&z[..m]))?
        .with_domain(DomainSpec::unit_simplex(dim))?;
    let t_est = (6.0 * g * r / eps_n).powi(2).ceil().max(1.0);
    let cfg = cfg_base.radius(r).record_every(((t_est / 500.0) as u64).max(1));
    let mut oracle = NoisyOracle::new(spec.clone(), theta_used, NoiseMode::Hash, seed ^ 0x5EED)?;
    let geom = MirrorGeometry::simplex_entropy(dim);
    let mut trace = qmd_solve(&spec, &mut oracle, &cfg, &geom)?;
    trace.param("theta_used", theta_used);
    trace.param("epsilon_normalized", eps_n);

    let y: Vec<f64> = trace.output_point()[..m].iter().map(|v| problem.r_d() * v).collect();
    let (y0, objective, min_slack) = problem.certificate(&y)?;
    if !objective.is_finite() {
        return Err(Error::Numeric("dual certificate objective is not finite".into()));
    }
    let (data_queries, data_scans) = meter.map_or((0, 0), |mt| (mt.charged(), mt.scans()));
    let certificate = DualCertificate {
        y0,
        y,
        objective,
        min_slack_eig: min_slack,
        charged_queries: oracle.charged_queries(),
        actual_evals: oracle.actual_evals(),
        data_queries,
        data_scans,
    };
    let norm = certificate.l1_norm();
    if norm > problem.r_d() * (1.0 + 1e-9) {
        let msg = format!("dual solution has l1 norm {norm:.4} > r_d = {}; r_d may be too small", problem.r_d());
        log::warn!("{msg}");
        trace.warnings.push(msg);
    }
    Ok(DualRun { certificate, trace })
}
