//! Gradient and subgradient estimation from θ-approximate oracles.

mod dispatch;
mod statevector;
mod subgradient;
mod surrogate;

pub use dispatch::{
    estimate_gradient, exact_gradient_estimate, finite_difference_estimate, gradient_charge,
};
pub use statevector::{
    build_phase_state, decode_outcome, fourier_probabilities, jordan_measure, sample_outcome,
    statevector_radius, statevector_theta_budget, suppressed_bias_estimate, GridSpec,
};
pub use subgradient::{subgradient_charge, subgradient_estimate, SubgradientConfig};
pub use surrogate::{surrogate_charge, surrogate_gradient};

/// Default cap on statevector length B^d.
pub const DEFAULT_STATE_CAP: usize = 1 << 22;

/// Which estimator produced a gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Statevector,
    Surrogate,
    Exact,
    FiniteDifference,
}

impl std::str::FromStr for Backend {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "statevector" => Ok(Backend::Statevector),
            "surrogate" => Ok(Backend::Surrogate),
            "exact" => Ok(Backend::Exact),
            "fd" | "finite_difference" => Ok(Backend::FiniteDifference),
            _ => Err(crate::Error::Config(format!("unknown backend {s:?}"))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Backend::Statevector => "statevector",
            Backend::Surrogate => "surrogate",
            Backend::Exact => "exact",
            Backend::FiniteDifference => "fd",
        };
        f.write_str(s)
    }
}

/// An estimated (sub)gradient with its guarantee parameters and cost.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    pub k: Vec<f64>,
    /// Target accuracy σ (ℓ∞ bias and root second moment).
    pub sigma: f64,
    /// Bias bound δ.
    pub delta: f64,
    /// Failure probability.
    pub rho: f64,
    pub charged_queries: u64,
    pub actual_evals: u64,
    pub backend: Backend,
    /// Statevector request fell back to the surrogate.
    pub downgraded: bool,
    /// Oracle θ exceeded the estimator's precision budget.
    pub budget_exceeded: bool,
    /// A failure draw replaced the estimate.
    pub failed: bool,
    /// Dual-norm error bound of the subgradient guarantee.
    pub error_bound: Option<f64>,
    /// Additive offset 2Gϑr₁ of the subgradient guarantee.
    pub offset: Option<f64>,
}

impl GradientEstimate {
    pub(crate) fn new(k: Vec<f64>, backend: Backend, charged_queries: u64) -> Self {
        GradientEstimate {
            k,
            sigma: 0.0,
            delta: 0.0,
            rho: 0.0,
            charged_queries,
            actual_evals: 0,
            backend,
            downgraded: false,
            budget_exceeded: false,
            failed: false,
            error_bound: None,
            offset: None,
        }
    }
}

/// Coordinate-wise median of an odd number of samples.
pub fn coordinate_median(samples: &[Vec<f64>]) -> Vec<f64> {
    let d = samples.first().map_or(0, |s| s.len());
    let mut col = vec![0.0; samples.len()];
    (0..d)
        .map(|i| {
            for (c, s) in col.iter_mut().zip(samples) {
                *c = s[i];
            }
            col.sort_by(f64::total_cmp);
            let n = col.len();
            if n % 2 == 1 {
                col[n / 2]
            } else {
                0.5 * (col[n / 2 - 1] + col[n / 2])
            }
        })
        .collect()
}
