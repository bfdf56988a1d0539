use crate::error::{Error, Result};
use crate::par::Execution;
use crate::qgrad::Backend;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Qpsm,
    QgdConvex,
    QgdPl,
    Qmd,
    Qda,
    Qmp,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qpsm" => Ok(Method::Qpsm),
            "qgd_convex" => Ok(Method::QgdConvex),
            "qgd_pl" => Ok(Method::QgdPl),
            "qmd" => Ok(Method::Qmd),
            "qda" => Ok(Method::Qda),
            "qmp" => Ok(Method::Qmp),
            _ => Err(Error::Config(format!("unknown method {s:?}"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Qpsm => "qpsm",
            Method::QgdConvex => "qgd_convex",
            Method::QgdPl => "qgd_pl",
            Method::Qmd => "qmd",
            Method::Qda => "qda",
            Method::Qmp => "qmp",
        })
    }
}

impl Method {
    /// Whether the method uses smooth-gradient estimates (as opposed to the
    /// subgradient estimator).
    pub fn is_smooth(&self) -> bool {
        matches!(self, Method::QgdConvex | Method::QgdPl | Method::Qmp)
    }
}

/// Solver parameters. Unset fields are derived from the method's theorem.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    pub epsilon: Option<f64>,
    pub iterations: Option<u64>,
    pub eta: Option<f64>,
    /// R: distance bound (qpsm, qgd_convex) or √D_Φ(x⋆, x₁) bound (mirror methods).
    pub radius: Option<f64>,
    /// Fixed gradient accuracy σ for qgd_pl and qmp.
    pub sigma: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub seed: u64,
    pub backend: Backend,
    /// c in qmp's T = ⌈c·LR²/(με)⌉.
    pub mp_constant: f64,
    /// Constant multiplying the θ budgets stated up to constants.
    pub theta_constant: f64,
    pub inject_failures: bool,
    /// Record every k-th iteration (the last one is always recorded).
    pub record_every: u64,
    pub exec: Execution,
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        SolverConfig {
            method,
            epsilon: None,
            iterations: None,
            eta: None,
            radius: None,
            sigma: None,
            x0: None,
            seed: 0,
            backend: Backend::Surrogate,
            mp_constant: 4.0,
            theta_constant: 1e-3,
            inject_failures: true,
            record_every: 1,
            exec: Execution::default(),
        }
    }

    pub fn epsilon(mut self, eps: f64) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn iterations(mut self, t: u64) -> Self {
        self.iterations = Some(t);
        self
    }

    pub fn eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn sigma(mut self, s: f64) -> Self {
        self.sigma = Some(s);
        self
    }

    pub fn x0(mut self, x: Vec<f64>) -> Self {
        self.x0 = Some(x);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn backend(mut self, b: Backend) -> Self {
        self.backend = b;
        self
    }

    pub fn record_every(mut self, k: u64) -> Self {
        self.record_every = k.max(1);
        self
    }

    pub fn without_failures(mut self) -> Self {
        self.inject_failures = false;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let pos = |v: Option<f64>, name: &str| match v {
            Some(x) if !(x > 0.0) || !x.is_finite() => {
                Err(Error::Config(format!("{name} = {x} must be positive and finite")))
            }
            _ => Ok(()),
        };
        pos(self.epsilon, "epsilon")?;
        pos(self.eta, "eta")?;
        pos(self.radius, "radius")?;
        pos(self.sigma, "sigma")?;
        if self.iterations == Some(0) {
            return Err(Error::Config("iterations must be >= 1".into()));
        }
        if !(self.mp_constant > 0.0) || !(self.theta_constant > 0.0) {
            return Err(Error::Config("constants must be positive".into()));
        }
        Ok(())
    }

    /// Resolves (T, ε) given T = t_of(ε) and its inverse.
    pub(crate) fn resolve_horizon(
        &self,
        t_of: impl Fn(f64) -> f64,
        eps_of: impl Fn(f64) -> f64,
    ) -> Result<(u64, f64)> {
        match (self.iterations, self.epsilon) {
            (Some(t), Some(e)) => Ok((t, e)),
            (Some(t), None) => Ok((t, eps_of(t as f64))),
            (None, Some(e)) => {
                let t = t_of(e).ceil();
                if !t.is_finite() || t > 1e12 {
                    return Err(Error::Config(format!("derived iteration count {t:e} is too large")));
                }
                Ok((t.max(1.0) as u64, e))
            }
            (None, None) => Err(Error::Config("set epsilon or iterations".into())),
        }
    }
}
