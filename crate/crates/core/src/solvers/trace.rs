use super::config::SolverConfig;

/// One recorded iteration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TraceRecord {
    pub iter: u64,
    /// f at the reported iterate (the running average for averaging methods).
    pub f_value: f64,
    pub gap: Option<f64>,
    pub charged_queries: u64,
    pub actual_evals: u64,
    /// Gradient accuracy targeted at this iteration, if any.
    pub sigma: Option<f64>,
    /// Milliseconds since the solver started.
    #[serde(default)]
    pub wallclock_ms: f64,
}

/// Output of a solver run.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub config: SolverConfig,
    pub records: Vec<TraceRecord>,
    pub final_point: Vec<f64>,
    pub averaged_point: Option<Vec<f64>>,
    pub seed: u64,
    /// Iterations actually run.
    pub iterations: u64,
    pub epsilon: f64,
    pub eta: f64,
    /// Derived parameters (r1, rho, sigma, R, G, ...), in insertion order.
    pub params: Vec<(String, f64)>,
    pub theta_budget: f64,
    pub budget_exceeded: bool,
    pub warnings: Vec<String>,
    /// Queries charged per gradient estimate, when constant across the run.
    pub per_estimate_charge: Option<u64>,
    pub estimates: u64,
    pub failures: u64,
    pub downgrades: u64,
    started: std::time::Instant,
}

impl RunTrace {
    pub(crate) fn new(config: &SolverConfig) -> Self {
        RunTrace {
            config: config.clone(),
            records: Vec::new(),
            final_point: Vec::new(),
            averaged_point: None,
            seed: config.seed,
            iterations: 0,
            epsilon: 0.0,
            eta: 0.0,
            params: Vec::new(),
            theta_budget: f64::INFINITY,
            budget_exceeded: false,
            warnings: Vec::new(),
            per_estimate_charge: None,
            estimates: 0,
            failures: 0,
            downgrades: 0,
            started: std::time::Instant::now(),
        }
    }

    pub(crate) fn param(&mut self, name: &str, v: f64) {
        self.params.push((name.to_string(), v));
    }

    pub fn get_param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub(crate) fn check_budget(&mut self, theta: f64, budget: f64) {
        self.theta_budget = budget;
        if theta > budget {
            self.budget_exceeded = true;
            let msg = format!("theta {theta:e} exceeds the precision budget {budget:e}");
            log::warn!("{msg}");
            self.warnings.push(msg);
        }
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("trace has an initial record")
    }

    pub fn final_gap(&self) -> Option<f64> {
        self.last().gap
    }

    pub fn charged_queries(&self) -> u64 {
        self.last().charged_queries
    }

    pub fn actual_evals(&self) -> u64 {
        self.last().actual_evals
    }

    /// The point a method reports: the running average when it keeps one.
    pub fn output_point(&self) -> &[f64] {
        self.averaged_point.as_deref().unwrap_or(&self.final_point)
    }

    pub(crate) fn should_record(&self, t: u64, last: u64) -> bool {
        t == last || t % self.config.record_every == 0
    }
}

impl RunTrace {
    pub(crate) fn record(
        &mut self,
        iter: u64,
        f_value: f64,
        f_star: Option<f64>,
        oracle: &crate::oracle::NoisyOracle,
        sigma: Option<f64>,
    ) {
        self.records.push(TraceRecord {
            iter,
            f_value,
            gap: f_star.map(|s| f_value - s),
            charged_queries: oracle.charged_queries(),
            actual_evals: oracle.actual_evals(),
            sigma,
            wallclock_ms: self.started.elapsed().as_secs_f64() * 1e3,
        });
    }

    pub(crate) fn note_estimate(&mut self, est: &crate::qgrad::GradientEstimate) {
        self.estimates += 1;
        self.failures += est.failed as u64;
        self.downgrades += est.downgraded as u64;
        if est.budget_exceeded && !self.budget_exceeded {
            self.budget_exceeded = true;
            self.warnings
                .push("theta exceeds the gradient estimator's precision budget".to_string());
        }
    }
}
