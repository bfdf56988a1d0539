//! Objective and feasible-set descriptions.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_len, Error, Result};
use crate::geometry::linalg;
use crate::norms::lp_norm;

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A convex feasible set.
///
/// Spectraplex points are stored as row-major `n × n` flattened matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Ball { center: Vec<f64>, radius: f64 },
    Simplex { dim: usize, scale: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Spectraplex { n: usize },
}

impl DomainSpec {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || center.is_empty() {
            return Err(Error::InvalidInput("ball needs radius > 0 and d >= 1".into()));
        }
        Ok(DomainSpec::Ball { center, radius })
    }

    pub fn simplex(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 || !(scale > 0.0) {
            return Err(Error::InvalidInput("simplex needs d >= 1 and scale > 0".into()));
        }
        Ok(DomainSpec::Simplex { dim, scale })
    }

    pub fn unit_simplex(dim: usize) -> Self {
        DomainSpec::Simplex { dim, scale: 1.0 }
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_len(lo.len(), hi.len())?;
        if lo.is_empty() || lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(Error::InvalidInput("box needs lo <= hi coordinatewise".into()));
        }
        Ok(DomainSpec::Box { lo, hi })
    }

    /// Ambient dimension of a point (n² for the spectraplex).
    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Ball { center, .. } => center.len(),
            DomainSpec::Simplex { dim, .. } => *dim,
            DomainSpec::Box { lo, .. } => lo.len(),
            DomainSpec::Spectraplex { n } => n * n,
        }
    }

    /// Diameter in the ℓp norm (trace norm for the spectraplex when p = 1,
    /// Frobenius norm when p = 2).
    pub fn diameter(&self, p: f64) -> f64 {
        match self {
            DomainSpec::Ball { center, radius } => {
                let d = center.len() as f64;
                // the ℓp-diameter of an ℓ2 ball is 2r·max(1, d^{1/p − 1/2})
                let e = if p.is_infinite() { -0.5 } else { 1.0 / p - 0.5 };
                2.0 * radius * d.powf(e.max(0.0))
            }
            DomainSpec::Simplex { scale, .. } => {
                let w = if p.is_infinite() { 1.0 } else { 2f64.powf(1.0 / p) };
                scale * w
            }
            DomainSpec::Box { lo, hi } => {
                let w: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| h - l).collect();
                lp_norm(&w, p)
            }
            DomainSpec::Spectraplex { .. } => {
                if p.is_infinite() {
                    1.0
                } else {
                    2f64.powf(1.0 / p)
                }
            }
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            DomainSpec::Ball { center, radius } => {
                let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                r2.sqrt() <= radius + tol
            }
            DomainSpec::Simplex { scale, .. } => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - scale).abs() <= tol
            }
            DomainSpec::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| *v >= l - tol && *v <= h + tol),
            DomainSpec::Spectraplex { n } => {
                let m = linalg::from_flat(x, *n);
                if (&m - m.transpose()).amax() > tol {
                    return false;
                }
                match linalg::sym_eig(&m) {
                    Ok(e) => {
                        e.values.iter().all(|v| *v >= -tol) && (m.trace() - 1.0).abs() <= tol
                    }
                    Err(_) => false,
                }
            }
        }
    }

    /// Euclidean (Frobenius for the spectraplex) projection.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), x.len())?;
        crate::error::check_finite(x, "point")?;
        Ok(match self {
            DomainSpec::Ball { center, radius } => {
                let diff: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let n = lp_norm(&diff, 2.0);
                if n <= *radius {
                    x.to_vec()
                } else {
                    let s = radius / n;
                    center.iter().zip(&diff).map(|(c, v)| c + s * v).collect()
                }
            }
            DomainSpec::Simplex { scale, .. } => project_simplex(x, *scale),
            DomainSpec::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| v.clamp(*l, *h))
                .collect(),
            DomainSpec::Spectraplex { n } => {
                let m = linalg::symmetrize(&linalg::from_flat(x, *n));
                let e = linalg::sym_eig(&m)?;
                let lam = project_simplex(e.values.as_slice(), 1.0);
                linalg::to_flat(&linalg::reconstruct(&e.vectors, &lam))
            }
        })
    }

    /// A canonical interior starting point: the center, barycenter or
    /// maximally mixed state.
    pub fn center_point(&self) -> Vec<f64> {
        match self {
            DomainSpec::Ball { center, .. } => center.clone(),
            DomainSpec::Simplex { dim, scale } => vec![scale / *dim as f64; *dim],
            DomainSpec::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect(),
            DomainSpec::Spectraplex { n } => {
                let mut v = vec![0.0; n * n];
                for i in 0..*n {
                    v[i * n + i] = 1.0 / *n as f64;
                }
                v
            }
        }
    }
}

/// Euclidean projection onto {x ≥ 0, Σx = scale} by the sort-and-threshold rule.
pub fn project_simplex(x: &[f64], scale: f64) -> Vec<f64> {
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (i, v) in u.iter().enumerate() {
        cum += v;
        let t = (cum - scale) / (i + 1) as f64;
        if v - t > 0.0 {
            tau = t;
        }
    }
    x.iter().map(|v| (v - tau).max(0.0)).collect()
}

/// A convex objective with its constants and feasible set.
#[derive(Clone)]
pub struct ObjectiveSpec {
    pub name: String,
    pub dim: usize,
    evaluator: ScalarFn,
    exact_gradient: Option<VectorFn>,
    /// Lipschitz constant with respect to `norm_p`.
    pub lipschitz: f64,
    pub norm_p: f64,
    pub smoothness: Option<f64>,
    pub pl: Option<f64>,
    pub domain: Option<DomainSpec>,
    pub f_star: Option<f64>,
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("lipschitz", &self.lipschitz)
            .field("norm_p", &self.norm_p)
            .field("smoothness", &self.smoothness)
            .field("pl", &self.pl)
            .field("domain", &self.domain)
            .field("f_star", &self.f_star)
            .finish()
    }
}

impl ObjectiveSpec {
    pub fn new<F>(name: &str, dim: usize, lipschitz: f64, norm_p: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if !(lipschitz > 0.0) || !lipschitz.is_finite() {
            return Err(Error::InvalidInput(format!("Lipschitz constant {lipschitz} must be > 0")));
        }
        crate::norms::dual_exponent(norm_p)?;
        Ok(ObjectiveSpec {
            name: name.to_string(),
            dim,
            evaluator: Arc::new(f),
            exact_gradient: None,
            lipschitz,
            norm_p,
            smoothness: None,
            pl: None,
            domain: None,
            f_star: None,
        })
    }

    pub fn with_gradient<F>(mut self, g: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.exact_gradient = Some(Arc::new(g));
        self
    }

    pub fn with_smoothness(mut self, l: f64) -> Result<Self> {
        if !(l > 0.0) {
            return Err(Error::InvalidInput(format!("smoothness {l} must be > 0")));
        }
        if let Some(mu) = self.pl {
            if mu > l {
                return Err(Error::InvalidInput("need L >= mu".into()));
            }
        }
        self.smoothness = Some(l);
        Ok(self)
    }

    pub fn with_pl(mut self, mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::InvalidInput(format!("PL constant {mu} must be > 0")));
        }
        if let Some(l) = self.smoothness {
            if mu > l {
                return Err(Error::InvalidInput("need L >= mu".into()));
            }
        }
        self.pl = Some(mu);
        Ok(self)
    }

    pub fn with_domain(mut self, domain: DomainSpec) -> Result<Self> {
        check_len(self.dim, domain.dim())?;
        self.domain = Some(domain);
        Ok(self)
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    /// Exact objective value. Reference only; solvers go through the oracle.
    pub fn value(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }

    pub fn has_gradient(&self) -> bool {
        self.exact_gradient.is_some()
    }

    /// Exact gradient, used only by the surrogate and exact backends.
    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.exact_gradient.as_ref().map(|g| g(x))
    }

    pub fn gap(&self, x: &[f64]) -> Option<f64> {
        self.f_star.map(|s| self.value(x) - s)
    }
}
