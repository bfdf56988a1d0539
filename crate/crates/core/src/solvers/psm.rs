//! Projected subgradient method.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_oracle, lipschitz_in, push_average, require_domain, start_point, RunTrace, SolverConfig};
use crate::error::Result;
use crate::norms::NormSpec;
use crate::oracle::NoisyOracle;
use crate::problem::ObjectiveSpec;
use crate::qgrad::{subgradient_charge, subgradient_estimate, SubgradientConfig};

/// x_{t+1} = Π_X(x_t − η·g̃_t) with T = ⌈(3RG/ε)²⌉, η = R/(G√T),
/// r₁ = ε/(6G√d), ρ = 1/(3T); reports the average of x₁..x_T.
pub fn qpsm_solve(problem: &ObjectiveSpec, oracle: &mut NoisyOracle, cfg: &SolverConfig) -> Result<RunTrace> {
    cfg.validate()?;
    check_oracle(problem, oracle)?;
    let domain = require_domain(problem)?;
    let d = problem.dim;
    let norms = NormSpec::l2(d);
    let g = lipschitz_in(problem, 2.0);
    let r = cfg.radius.unwrap_or_else(|| domain.diameter(2.0));
    let (t_max, eps) = cfg.resolve_horizon(|e| (3.0 * r * g / e).powi(2), |t| 3.0 * r * g / t.sqrt())?;
    let eta = cfg.eta.unwrap_or(r / (g * (t_max as f64).sqrt()));
    let r1 = eps / (6.0 * g * norms.vartheta);
    let rho = 1.0 / (3.0 * t_max as f64);
    let mut sub = SubgradientConfig::new(r1, rho)?;
    sub.inject_failures = cfg.inject_failures;

    let mut trace = RunTrace::new(cfg);
    trace.iterations = t_max;
    trace.epsilon = eps;
    trace.eta = eta;
    for (k, v) in [("G", g), ("R", r), ("r1", r1), ("rho", rho)] {
        trace.param(k, v);
    }
    let budget = cfg.theta_constant * eps.powi(5) / (g.powi(4) * r.powi(4) * (d as f64).powf(4.5));
    trace.check_budget(oracle.theta(), budget);
    trace.per_estimate_charge = Some(subgradient_charge(d, rho));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = start_point(cfg, problem)?;
    let mut avg = x.clone();
    trace.record(0, problem.value(&avg), problem.f_star, oracle, None);
    for t in 1..=t_max {
        let est = subgradient_estimate(oracle, &x, g, &sub, &norms, &mut rng)?;
        trace.note_estimate(&est);
        if trace.should_record(t, t_max) {
            trace.record(t, problem.value(&avg), problem.f_star, oracle, None);
        }
        let y: Vec<f64> = x.iter().zip(&est.k).map(|(a, b)| a - eta * b).collect();
        x = domain.project(&y)?;
        if t < t_max {
            push_average(&mut avg, &x, t);
        }
    }
    trace.final_point = x;
    trace.averaged_point = Some(avg);
    Ok(trace)
}
