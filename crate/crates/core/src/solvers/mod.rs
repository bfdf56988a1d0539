//! First-order methods driven by emulated quantum (sub)gradient estimates.

mod config;
mod gd;
mod mirror;
mod psm;
mod trace;

pub use config::{Method, SolverConfig};
pub use gd::{qgd_convex_solve, qgd_pl_solve};
pub use mirror::{qda_solve, qmd_solve, qmp_solve};
pub use psm::qpsm_solve;
pub use trace::{RunTrace, TraceRecord};

use crate::error::{Error, Result};
use crate::geometry::{MirrorGeometry, Setup};
use crate::oracle::NoisyOracle;
use crate::problem::{DomainSpec, ObjectiveSpec};

/// Dispatches on `cfg.method`. Mirror methods use `geom`, or the natural
/// geometry of the problem's domain when `geom` is `None`.
pub fn solve(
    problem: &ObjectiveSpec,
    oracle: &mut NoisyOracle,
    cfg: &SolverConfig,
    geom: Option<&MirrorGeometry>,
) -> Result<RunTrace> {
    let natural;
    let geom = match geom {
        Some(g) => g,
        None => {
            natural = natural_geometry(problem)?;
            &natural
        }
    };
    match cfg.method {
        Method::Qpsm => qpsm_solve(problem, oracle, cfg),
        Method::QgdConvex => qgd_convex_solve(problem, oracle, cfg),
        Method::QgdPl => qgd_pl_solve(problem, oracle, cfg),
        Method::Qmd => qmd_solve(problem, oracle, cfg, geom),
        Method::Qda => qda_solve(problem, oracle, cfg, geom),
        Method::Qmp => qmp_solve(problem, oracle, cfg, geom),
    }
}

/// Entropy on simplices, Euclidean elsewhere.
pub fn natural_geometry(problem: &ObjectiveSpec) -> Result<MirrorGeometry> {
    Ok(match &problem.domain {
        Some(DomainSpec::Simplex { dim, .. }) => MirrorGeometry::simplex_entropy(*dim),
        Some(DomainSpec::Spectraplex { n }) => MirrorGeometry::spectraplex_entropy(*n),
        _ => MirrorGeometry::for_setup(Setup::Euclidean, problem.dim)?,
    })
}

/// Lipschitz constant of `problem` with respect to the ℓ_target norm, from
/// the declared constant via ‖v‖_p ≤ d^{max(0, 1/p − 1/target)}·‖v‖_target.
pub fn lipschitz_in(problem: &ObjectiveSpec, target: f64) -> f64 {
    let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
    let e = (inv(problem.norm_p) - inv(target)).max(0.0);
    if e == 0.0 {
        problem.lipschitz
    } else {
        problem.lipschitz * (problem.dim as f64).powf(e)
    }
}

pub(crate) fn require_domain(problem: &ObjectiveSpec) -> Result<&DomainSpec> {
    problem
        .domain
        .as_ref()
        .ok_or_else(|| Error::Config(format!("{} needs a bounded domain", problem.name)))
}

pub(crate) fn check_oracle(problem: &ObjectiveSpec, oracle: &NoisyOracle) -> Result<()> {
    crate::error::check_len(problem.dim, oracle.dim())
}

/// Starting point: `cfg.x0` if given (must be feasible), else the domain's
/// canonical center.
pub(crate) fn start_point(cfg: &SolverConfig, problem: &ObjectiveSpec) -> Result<Vec<f64>> {
    match (&cfg.x0, &problem.domain) {
        (Some(x), Some(d)) => {
            crate::error::check_len(problem.dim, x.len())?;
            if !d.contains(x, 1e-9) {
                return Err(Error::Domain("start point outside the domain".into()));
            }
            Ok(x.clone())
        }
        (Some(x), None) => {
            crate::error::check_len(problem.dim, x.len())?;
            Ok(x.clone())
        }
        (None, Some(d)) => Ok(d.center_point()),
        (None, None) => Err(Error::Config("unconstrained problems need a start point".into())),
    }
}

/// Updates a running mean with its (count + 1)-th sample.
pub(crate) fn push_average(avg: &mut [f64], x: &[f64], count: u64) {
    let w = 1.0 / (count + 1) as f64;
    for (a, v) in avg.iter_mut().zip(x) {
        *a += w * (v - *a);
    }
}
