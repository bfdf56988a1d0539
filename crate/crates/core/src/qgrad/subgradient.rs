//! Randomized-smoothing subgradient estimator.

use rand::Rng;

use super::{Backend, GradientEstimate};
use crate::error::{check_finite, check_len, Error, Result};
use crate::norms::NormSpec;
use crate::oracle::NoisyOracle;

/// Smoothing radius r₁ and failure probability ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgradientConfig {
    pub r1: f64,
    pub rho: f64,
    /// Replace the estimate by a uniform draw in [−G, G]^d with probability ρ.
    pub inject_failures: bool,
}

impl SubgradientConfig {
    pub fn new(r1: f64, rho: f64) -> Result<Self> {
        if !(r1 > 0.0) || !r1.is_finite() {
            return Err(Error::Config(format!("r1 = {r1} must be > 0")));
        }
        if !(rho > 0.0 && rho <= 1.0 / 3.0) {
            return Err(Error::Config(format!("rho = {rho} must lie in (0, 1/3]")));
        }
        Ok(SubgradientConfig {
            r1,
            rho,
            inject_failures: true,
        })
    }

    pub fn without_failures(mut self) -> Self {
        self.inject_failures = false;
        self
    }

    /// r₂ = √(θ·r₁·ρ/(dG)). An exact oracle has no noise to balance, so
    /// θ = 0 takes the largest admissible radius r₂ = r₁.
    pub fn r2(&self, theta: f64, dim: usize, lipschitz: f64) -> f64 {
        if theta == 0.0 {
            self.r1
        } else {
            (theta * self.r1 * self.rho / (dim as f64 * lipschitz)).sqrt().min(self.r1)
        }
    }

    /// Difference step h = r₂/d.
    pub fn step(&self, theta: f64, dim: usize, lipschitz: f64) -> f64 {
        self.r2(theta, dim, lipschitz) / dim as f64
    }
}

/// ⌈8·log₂(d/ρ)⌉.
pub fn subgradient_charge(dim: usize, rho: f64) -> u64 {
    (8.0 * (dim as f64 / rho).log2()).ceil().max(1.0) as u64
}

/// Central differences of f̃ at a uniform point z ∈ B∞(x, r₁) with step
/// r₂/d. Performs 2d evaluations and charges ⌈8·log₂(d/ρ)⌉ queries.
pub fn subgradient_estimate<R: Rng + ?Sized>(
    oracle: &mut NoisyOracle,
    x: &[f64],
    lipschitz: f64,
    cfg: &SubgradientConfig,
    norms: &NormSpec,
    rng: &mut R,
) -> Result<GradientEstimate> {
    let d = oracle.dim();
    check_len(d, x.len())?;
    check_finite(x, "point")?;
    if !(lipschitz > 0.0) {
        return Err(Error::InvalidInput(format!("G = {lipschitz} must be > 0")));
    }
    let theta = oracle.theta();
    let theta_max = cfg.r1 * d as f64 * lipschitz / cfg.rho;
    if theta > theta_max {
        return Err(Error::Config(format!(
            "theta = {theta:e} exceeds r1*d*G/rho = {theta_max:e}"
        )));
    }
    let h = cfg.step(theta, d, lipschitz);
    let z: Vec<f64> = x.iter().map(|v| v + rng.gen_range(-cfg.r1..=cfg.r1)).collect();
    let mut k = Vec::with_capacity(d);
    let mut p = z.clone();
    for i in 0..d {
        let hi = z[i] + h;
        let lo = z[i] - h;
        p[i] = hi;
        let fp = oracle.evaluate(&p)?;
        p[i] = lo;
        let fm = oracle.evaluate(&p)?;
        p[i] = z[i];
        k.push((fp - fm) / (hi - lo));
    }
    let failed = cfg.inject_failures && rng.gen::<f64>() < cfg.rho;
    if failed {
        for v in k.iter_mut() {
            *v = rng.gen_range(-lipschitz..=lipschitz);
        }
    }
    let charge = subgradient_charge(d, cfg.rho);
    oracle.charge_queries(charge);
    let th = theta;
    let df = d as f64;
    let mut est = GradientEstimate::new(k, Backend::FiniteDifference, charge);
    est.rho = cfg.rho;
    est.actual_evals = 2 * d as u64;
    est.failed = failed;
    est.error_bound =
        Some(23.0 * 23.0 * norms.vartheta_star * (th * df.powi(3) * lipschitz / (cfg.rho * cfg.r1)).sqrt());
    est.offset = Some(2.0 * lipschitz * norms.vartheta * cfg.r1);
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ObjectiveSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn affine_is_exact() {
        let c = vec![0.5, -1.25, 2.0];
        let cc = c.clone();
        let spec = ObjectiveSpec::new("lin", 3, 2.0, 1.0, move |x| {
            1.0 + x.iter().zip(&cc).map(|(a, b)| a * b).sum::<f64>()
        })
        .unwrap();
        let mut o = NoisyOracle::exact(spec);
        let cfg = SubgradientConfig::new(0.01, 1.0 / 3.0).unwrap().without_failures();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = subgradient_estimate(&mut o, &[0.3, 0.1, -0.2], 2.0, &cfg, &NormSpec::l1(3), &mut rng).unwrap();
        for i in 0..3 {
            assert!((e.k[i] - c[i]).abs() < 1e-12, "{:?}", e.k);
        }
        assert_eq!(o.actual_evals(), 6);
        assert_eq!(o.charged_queries(), subgradient_charge(3, 1.0 / 3.0));
        // ⌈8·log₂ 9⌉ = ⌈25.36⌉
        assert_eq!(o.charged_queries(), 26);
    }

    #[test]
    fn l1_away_from_kinks() {
        let spec = ObjectiveSpec::new("l1", 2, 1.0, f64::INFINITY, |x| x.iter().map(|v| v.abs()).sum()).unwrap();
        let mut o = NoisyOracle::new(spec, 1e-6, crate::oracle::NoiseMode::Hash, 1).unwrap();
        let cfg = SubgradientConfig::new(0.01, 0.1).unwrap().without_failures();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = subgradient_estimate(&mut o, &[0.5, 0.7], 1.0, &cfg, &NormSpec::new(f64::INFINITY, 2).unwrap(), &mut rng).unwrap();
        // noise contributes at most 2θ/(2h) per coordinate
        let h = cfg.step(1e-6, 2, 1.0);
        for v in &e.k {
            assert!((v - 1.0).abs() <= 1e-6 / h + 1e-9);
        }
    }

    #[test]
    fn theta_range_is_checked() {
        let spec = ObjectiveSpec::new("z", 1, 1.0, 2.0, |_| 0.0).unwrap();
        let mut o = NoisyOracle::new(spec, 1.0, crate::oracle::NoiseMode::Hash, 1).unwrap();
        let cfg = SubgradientConfig::new(0.01, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            subgradient_estimate(&mut o, &[0.0], 1.0, &cfg, &NormSpec::l2(1), &mut rng),
            Err(Error::Config(_))
        ));
        assert!(SubgradientConfig::new(0.01, 0.5).is_err());
    }
}
