//! Gradient descent with estimated gradients, η = 1/L.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_oracle, start_point, RunTrace, SolverConfig};
use crate::error::{Error, Result};
use crate::norms::NormSpec;
use crate::oracle::NoisyOracle;
use crate::problem::ObjectiveSpec;
use crate::qgrad::{estimate_gradient, gradient_charge, statevector_theta_budget};

fn step(problem: &ObjectiveSpec, x: &[f64], k: &[f64], eta: f64) -> Result<Vec<f64>> {
    let y: Vec<f64> = x.iter().zip(k).map(|(a, b)| a - eta * b).collect();
    match &problem.domain {
        Some(d) => d.project(&y),
        None => Ok(y),
    }
}

fn smoothness(problem: &ObjectiveSpec) -> Result<f64> {
    problem
        .smoothness
        .ok_or_else(|| Error::Config(format!("{} needs a smoothness constant L", problem.name)))
}

fn bits_for(g: f64, sigma: f64) -> usize {
    1usize << ((12.0 * g / sigma).log2().ceil().clamp(1.0, 30.0) as u32)
}

/// Gradient descent under the PŁ condition: T = ⌈κ·ln(2Δ₀/ε)⌉ iterations at
/// fixed σ = √(εμ/(5d)); reports the last iterate.
pub fn qgd_pl_solve(problem: &ObjectiveSpec, oracle: &mut NoisyOracle, cfg: &SolverConfig) -> Result<RunTrace> {
    cfg.validate()?;
    check_oracle(problem, oracle)?;
    let l = smoothness(problem)?;
    let mu = problem
        .pl
        .ok_or_else(|| Error::Config(format!("{} needs a PL constant mu", problem.name)))?;
    let d = problem.dim;
    let g = problem.lipschitz;
    let kappa = l / mu;
    let x0 = start_point(cfg, problem)?;
    let (t_max, eps) = match (cfg.iterations, cfg.epsilon) {
        (Some(t), Some(e)) => (t, e),
        (Some(t), None) => {
            let f_star = problem.f_star.ok_or_else(|| {
                Error::Config("qgd_pl needs f_star or epsilon to fix the accuracy".into())
            })?;
            let gap0 = (problem.value(&x0) - f_star).max(f64::MIN_POSITIVE);
            (t, 2.0 * gap0 * (-(t as f64) / kappa).exp())
        }
        (None, eps) => {
            let eps = eps.ok_or_else(|| Error::Config("set epsilon or iterations".into()))?;
            let f_star = problem
                .f_star
                .ok_or_else(|| Error::Config("deriving T for qgd_pl needs f_star".into()))?;
            let gap0 = problem.value(&x0) - f_star;
            let t = (kappa * (2.0 * gap0 / eps).ln()).ceil();
            (if t.is_finite() { t.max(1.0) as u64 } else { 1 }, eps)
        }
    };
    let eta = cfg.eta.unwrap_or(1.0 / l);
    let sigma = cfg.sigma.unwrap_or((eps * mu / (5.0 * d as f64)).sqrt()).min(g);
    let norms = NormSpec::l2(d);

    let mut trace = RunTrace::new(cfg);
    trace.iterations = t_max;
    trace.epsilon = eps;
    trace.eta = eta;
    for (name, v) in [("G", g), ("L", l), ("mu", mu), ("kappa", kappa), ("sigma", sigma)] {
        trace.param(name, v);
    }
    trace.check_budget(oracle.theta(), statevector_theta_budget(g, l, sigma, &norms, bits_for(g, sigma)));
    trace.per_estimate_charge = Some(gradient_charge(cfg.backend, d, sigma, g));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = x0;
    trace.record(0, problem.value(&x), problem.f_star, oracle, None);
    for t in 1..=t_max {
        let est = estimate_gradient(oracle, &x, cfg.backend, sigma, g, l, &norms, &mut rng, cfg.exec)?;
        trace.note_estimate(&est);
        x = step(problem, &x, &est.k, eta)?;
        if trace.should_record(t, t_max) {
            trace.record(t, problem.value(&x), problem.f_star, oracle, Some(sigma));
        }
    }
    trace.final_point = x;
    Ok(trace)
}

/// Gradient descent for convex L-smooth f with known f⋆. Each iteration
/// measures δ_t = f̃(x_t) − f⋆ with one oracle query, stops once δ_t ≤ ε, and
/// otherwise estimates the gradient at σ_t = δ_t/(4R√d) (capped at G).
pub fn qgd_convex_solve(problem: &ObjectiveSpec, oracle: &mut NoisyOracle, cfg: &SolverConfig) -> Result<RunTrace> {
    cfg.validate()?;
    check_oracle(problem, oracle)?;
    let l = smoothness(problem)?;
    let f_star = problem
        .f_star
        .ok_or_else(|| Error::Config("qgd_convex needs the optimal value f_star".into()))?;
    let r = cfg
        .radius
        .ok_or_else(|| Error::Config("qgd_convex needs the level-set radius R".into()))?;
    let d = problem.dim;
    let g = problem.lipschitz;
    let (t_max, eps) = match (cfg.iterations, cfg.epsilon) {
        (Some(t), e) => (t, e.unwrap_or(0.0)),
        (None, Some(e)) => ((4.0 * l * r * r / e).ceil().max(1.0) as u64, e),
        (None, None) => return Err(Error::Config("set epsilon or iterations".into())),
    };
    let eta = cfg.eta.unwrap_or(1.0 / l);
    let norms = NormSpec::l2(d);
    let sqrt_d = (d as f64).sqrt();

    let mut trace = RunTrace::new(cfg);
    trace.iterations = 0;
    trace.epsilon = eps;
    trace.eta = eta;
    for (name, v) in [("G", g), ("L", l), ("R", r)] {
        trace.param(name, v);
    }
    let sigma_eps = (eps / (4.0 * r * sqrt_d)).min(g);
    let budget = if sigma_eps > 0.0 {
        statevector_theta_budget(g, l, sigma_eps, &norms, bits_for(g, sigma_eps))
    } else {
        0.0
    };
    trace.check_budget(oracle.theta(), budget);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = start_point(cfg, problem)?;
    for t in 0..=t_max {
        let delta = oracle.evaluate(&x)? - f_star;
        oracle.charge_queries(1);
        if delta <= eps || t == t_max {
            trace.record(t, problem.value(&x), Some(f_star), oracle, None);
            trace.iterations = t;
            break;
        }
        let sigma = (delta / (4.0 * r * sqrt_d)).min(g);
        let est = estimate_gradient(oracle, &x, cfg.backend, sigma, g, l, &norms, &mut rng, cfg.exec)?;
        trace.note_estimate(&est);
        if trace.should_record(t, t_max) {
            trace.record(t, problem.value(&x), Some(f_star), oracle, Some(sigma));
        }
        x = step(problem, &x, &est.k, eta)?;
    }
    trace.final_point = x;
    Ok(trace)
}
