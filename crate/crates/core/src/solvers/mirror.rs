//! Mirror descent, dual averaging and mirror prox.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_oracle, lipschitz_in, push_average, require_domain, start_point, RunTrace, SolverConfig};
use crate::error::{Error, Result};
use crate::geometry::mirror::normalized_exp;
use crate::geometry::{MirrorGeometry, Setup};
use crate::oracle::NoisyOracle;
use crate::problem::{DomainSpec, ObjectiveSpec};
use crate::qgrad::{estimate_gradient, gradient_charge, subgradient_charge, subgradient_estimate, SubgradientConfig};

fn check_pair(geom: &MirrorGeometry, domain: &DomainSpec, dim: usize) -> Result<()> {
    crate::error::check_len(dim, geom.dim)?;
    match (geom.setup, domain) {
        (Setup::Euclidean, _) | (Setup::SimplexEntropy, DomainSpec::Simplex { .. }) => Ok(()),
        (s, d) => Err(Error::Config(format!("solvers do not support {s:?} on {d:?}"))),
    }
}

/// Default R with R² ≥ D_Φ(x⋆, x₁): s·ln d from the barycenter of a simplex
/// of scale s, K₂/√2 for the Euclidean map.
fn default_radius(geom: &MirrorGeometry, domain: &DomainSpec) -> f64 {
    match (geom.setup, domain) {
        (Setup::SimplexEntropy, DomainSpec::Simplex { dim, scale }) => {
            (scale * (*dim as f64).ln()).sqrt().max(f64::MIN_POSITIVE)
        }
        _ => domain.diameter(2.0) / 2f64.sqrt(),
    }
}

struct MirrorParams {
    g: f64,
    t_max: u64,
    eta: f64,
    sub: SubgradientConfig,
}

fn nonsmooth_params(
    problem: &ObjectiveSpec,
    oracle: &NoisyOracle,
    cfg: &SolverConfig,
    geom: &MirrorGeometry,
    domain: &DomainSpec,
    trace: &mut RunTrace,
) -> Result<MirrorParams> {
    let d = problem.dim;
    let mu = geom.mu;
    let g = lipschitz_in(problem, geom.norm.p);
    let r = cfg.radius.unwrap_or_else(|| default_radius(geom, domain));
    let (t_max, eps) = cfg.resolve_horizon(
        |e| (6.0 * g * r / (mu.sqrt() * e)).powi(2),
        |t| 6.0 * g * r / (mu.sqrt() * t.sqrt()),
    )?;
    let eta = cfg.eta.unwrap_or(r * mu.sqrt() / (g * (t_max as f64).sqrt()));
    let r1 = eps / (6.0 * g * geom.norm.vartheta);
    let rho = 1.0 / (3.0 * t_max as f64);
    let mut sub = SubgradientConfig::new(r1, rho)?;
    sub.inject_failures = cfg.inject_failures;
    let k = domain.diameter(geom.norm.p);
    trace.iterations = t_max;
    trace.epsilon = eps;
    trace.eta = eta;
    for (name, v) in [("G", g), ("R", r), ("K", k), ("mu", mu), ("r1", r1), ("rho", rho)] {
        trace.param(name, v);
    }
    let budget = cfg.theta_constant * mu * eps.powi(5)
        / (g.powi(4) * r * r * k * k * geom.norm.vartheta_star.powi(2) * geom.norm.vartheta * (d as f64).powi(3));
    trace.check_budget(oracle.theta(), budget);
    trace.per_estimate_charge = Some(subgradient_charge(d, rho));
    Ok(MirrorParams { g, t_max, eta, sub })
}

/// x_{t+1} = Π^Φ(∇Φ⁻¹(∇Φ(x_t) − η·g̃_t)) with T = ⌈(6GR/(√μ·ε))²⌉,
/// η = (R/G)·√(μ/T), r₁ = ε/(6Gϑ), ρ = 1/(3T); reports the average of x₁..x_T.
pub fn qmd_solve(
    problem: &ObjectiveSpec,
    oracle: &mut NoisyOracle,
    cfg: &SolverConfig,
    geom: &MirrorGeometry,
) -> Result<RunTrace> {
    cfg.validate()?;
    check_oracle(problem, oracle)?;
    let domain = require_domain(problem)?;
    check_pair(geom, domain, problem.dim)?;
    let mut trace = RunTrace::new(cfg);
    let p = nonsmooth_params(problem, oracle, cfg, geom, domain, &mut trace)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = start_point(cfg, problem)?;
    let mut avg = x.clone();
    trace.record(0, problem.value(&avg), problem.f_star, oracle, None);
    for t in 1..=p.t_max {
        let est = subgradient_estimate(oracle, &x, p.g, &p.sub, &geom.norm, &mut rng)?;
        trace.note_estimate(&est);
        if trace.should_record(t, p.t_max) {
            trace.record(t, problem.value(&avg), problem.f_star, oracle, None);
        }
        x = geom.mirror_step(&x, &est.k, p.eta, domain)?;
        if t < p.t_max {
            push_average(&mut avg, &x, t);
        }
    }
    trace.final_point = x;
    trace.averaged_point = Some(avg);
    Ok(trace)
}

/// argmin_x {η⟨S, x⟩ + Φ(x)} over the domain.
fn dual_averaging_point(geom: &MirrorGeometry, domain: &DomainSpec, s: &[f64], eta: f64) -> Result<Vec<f64>> {
    let y: Vec<f64> = s.iter().map(|v| -eta * v).collect();
    match (geom.setup, domain) {
        (Setup::SimplexEntropy, DomainSpec::Simplex { scale, .. }) => Ok(normalized_exp(&y, *scale)),
        (Setup::Euclidean, _) => domain.project(&y),
        (s, d) => Err(Error::Config(format!("dual averaging has no closed form for {s:?} on {d:?}"))),
    }
}

/// Dual averaging from x₁ = argmin Φ with the mirror-descent parameters;
/// `cfg.x0` is ignored. Reports the average of x₁..x_T.
pub fn qda_solve(
    problem: &ObjectiveSpec,
    oracle: &mut NoisyOracle,
    cfg: &SolverConfig,
    geom: &MirrorGeometry,
) -> Result<RunTrace> {
    cfg.validate()?;
    check_oracle(problem, oracle)?;
    let domain = require_domain(problem)?;
    check_pair(geom, domain, problem.dim)?;
    let mut trace = RunTrace::new(cfg);
    let p = nonsmooth_params(problem, oracle, cfg, geom, domain, &mut trace)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut s = vec![0.0; problem.dim];
    let mut x = dual_averaging_point(geom, domain, &s, p.eta)?;
    let mut avg = x.clone();
    trace.record(0, problem.value(&avg), problem.f_star, oracle, None);
    for t in 1..=p.t_max {
        let est = subgradient_estimate(oracle, &x, p.g, &p.sub, &geom.norm, &mut rng)?;
        trace.note_estimate(&est);
        if trace.should_record(t, p.t_max) {
            trace.record(t, problem.value(&avg), problem.f_star, oracle, None);
        }
        for (a, k) in s.iter_mut().zip(&est.k) {
            *a += k;
        }
        x = dual_averaging_point(geom, domain, &s, p.eta)?;
        if t < p.t_max {
            push_average(&mut avg, &x, t);
        }
    }
    trace.final_point = x;
    trace.averaged_point = Some(avg);
    Ok(trace)
}

/// Mirror prox with η = μ/L and T = ⌈c·LR²/(με)⌉: z_{t+1} from a gradient at
/// x_t, x_{t+1} from a gradient at z_{t+1}; reports the average of the z's.
/// Gradients target σ = εμ/(12ϑ*LK), capped at G.
pub fn qmp_solve(
    problem: &ObjectiveSpec,
    oracle: &mut NoisyOracle,
    cfg: &SolverConfig,
    geom: &MirrorGeometry,
) -> Result<RunTrace> {
    cfg.validate()?;
    check_oracle(problem, oracle)?;
    let domain = require_domain(problem)?;
    check_pair(geom, domain, problem.dim)?;
    let l = problem
        .smoothness
        .ok_or_else(|| Error::Config("mirror prox needs a smoothness constant L".into()))?;
    let d = problem.dim;
    let mu = geom.mu;
    let g = lipschitz_in(problem, geom.norm.p);
    let r = cfg.radius.unwrap_or_else(|| default_radius(geom, domain));
    let k = domain.diameter(geom.norm.p);
    let c = cfg.mp_constant;
    let (t_max, eps) = cfg.resolve_horizon(|e| c * l * r * r / (mu * e), |t| c * l * r * r / (mu * t))?;
    let eta = cfg.eta.unwrap_or(mu / l);
    let sigma = cfg
        .sigma
        .unwrap_or(eps * mu / (12.0 * geom.norm.vartheta_star * l * k))
        .min(g);

    let mut trace = RunTrace::new(cfg);
    trace.iterations = t_max;
    trace.epsilon = eps;
    trace.eta = eta;
    for (name, v) in [("G", g), ("L", l), ("R", r), ("K", k), ("mu", mu), ("sigma", sigma)] {
        trace.param(name, v);
    }
    let bits = (12.0 * g / sigma).log2().ceil().clamp(1.0, 30.0) as u32;
    let budget = crate::qgrad::statevector_theta_budget(g, l, sigma, &geom.norm, 1usize << bits);
    trace.check_budget(oracle.theta(), budget);
    trace.per_estimate_charge = Some(gradient_charge(cfg.backend, d, sigma, g));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = start_point(cfg, problem)?;
    let mut avg = x.clone();
    trace.record(0, problem.value(&x), problem.f_star, oracle, None);
    for t in 1..=t_max {
        let gx = estimate_gradient(oracle, &x, cfg.backend, sigma, g, l, &geom.norm, &mut rng, cfg.exec)?;
        trace.note_estimate(&gx);
        let z = geom.mirror_step(&x, &gx.k, eta, domain)?;
        let gz = estimate_gradient(oracle, &z, cfg.backend, sigma, g, l, &geom.norm, &mut rng, cfg.exec)?;
        trace.note_estimate(&gz);
        x = geom.mirror_step(&x, &gz.k, eta, domain)?;
        if t == 1 {
            avg.copy_from_slice(&z);
        } else {
            push_average(&mut avg, &z, t - 1);
        }
        if trace.should_record(t, t_max) {
            trace.record(t, problem.value(&avg), problem.f_star, oracle, Some(sigma));
        }
    }
    trace.final_point = x;
    trace.averaged_point = Some(avg);
    Ok(trace)
}
