//! Backend selection for smooth-gradient estimation.

use rand::Rng;

use super::statevector::suppressed_bias_estimate;
use super::surrogate::{surrogate_charge, surrogate_scaled};
use super::{Backend, GradientEstimate};
use crate::error::{check_finite, check_len, Error, Result};
use crate::norms::NormSpec;
use crate::oracle::NoisyOracle;
use crate::par::Execution;

/// Queries charged for one gradient estimate at accuracy σ.
pub fn gradient_charge(backend: Backend, dim: usize, sigma: f64, lipschitz: f64) -> u64 {
    match backend {
        Backend::FiniteDifference => 2 * dim as u64,
        _ => surrogate_charge(dim, sigma / (3.0 * lipschitz)),
    }
}

fn exact_grad(oracle: &NoisyOracle, x: &[f64]) -> Result<Vec<f64>> {
    oracle
        .base()
        .gradient(x)
        .ok_or_else(|| Error::Config(format!("objective {:?} has no exact gradient", oracle.base().name)))
}

/// The true gradient, charged as if estimated at accuracy σ.
pub fn exact_gradient_estimate(oracle: &mut NoisyOracle, x: &[f64], sigma: f64, lipschitz: f64) -> Result<GradientEstimate> {
    let g = exact_grad(oracle, x)?;
    let charge = gradient_charge(Backend::Exact, x.len(), sigma, lipschitz);
    oracle.charge_queries(charge);
    let mut est = GradientEstimate::new(g, Backend::Exact, charge);
    est.sigma = sigma;
    Ok(est)
}

/// Classical central differences with step √(2θ/L) (10⁻⁶·(1 + |xᵢ|) for an
/// exact oracle). Charges and performs 2d evaluations.
pub fn finite_difference_estimate(oracle: &mut NoisyOracle, x: &[f64], smoothness: f64) -> Result<GradientEstimate> {
    let d = x.len();
    let theta = oracle.theta();
    let mut p = x.to_vec();
    let mut k = Vec::with_capacity(d);
    for i in 0..d {
        let h = if theta > 0.0 {
            (2.0 * theta / smoothness).sqrt()
        } else {
            1e-6 * (1.0 + x[i].abs())
        };
        let (hi, lo) = (x[i] + h, x[i] - h);
        p[i] = hi;
        let fp = oracle.evaluate(&p)?;
        p[i] = lo;
        let fm = oracle.evaluate(&p)?;
        p[i] = x[i];
        k.push((fp - fm) / (hi - lo));
    }
    let charge = 2 * d as u64;
    oracle.charge_queries(charge);
    let mut est = GradientEstimate::new(k, Backend::FiniteDifference, charge);
    est.actual_evals = charge;
    est.sigma = if theta > 0.0 {
        (2.0 * theta * smoothness).sqrt()
    } else {
        0.0
    };
    Ok(est)
}

/// Gradient estimate with ℓ∞ accuracy σ from the chosen backend.
#[allow(clippy::too_many_arguments)]
pub fn estimate_gradient<R: Rng + ?Sized>(
    oracle: &mut NoisyOracle,
    x: &[f64],
    backend: Backend,
    sigma: f64,
    lipschitz: f64,
    smoothness: f64,
    norms: &NormSpec,
    rng: &mut R,
    exec: Execution,
) -> Result<GradientEstimate> {
    check_len(oracle.dim(), x.len())?;
    check_finite(x, "point")?;
    match backend {
        Backend::Statevector => {
            suppressed_bias_estimate(oracle, x, lipschitz, smoothness, sigma, norms, rng, None, exec)
        }
        Backend::Surrogate => {
            let g = exact_grad(oracle, x)?;
            let est = surrogate_scaled(&g, sigma, lipschitz, oracle.seed(), rng);
            oracle.charge_queries(est.charged_queries);
            Ok(est)
        }
        Backend::Exact => exact_gradient_estimate(oracle, x, sigma, lipschitz),
        Backend::FiniteDifference => finite_difference_estimate(oracle, x, smoothness),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ObjectiveSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quad() -> NoisyOracle {
        let spec = ObjectiveSpec::new("q", 2, 4.0, 2.0, |x| 0.5 * (x[0] * x[0] + 3.0 * x[1] * x[1]))
            .unwrap()
            .with_gradient(|x| vec![x[0], 3.0 * x[1]]);
        NoisyOracle::exact(spec)
    }

    #[test]
    fn exact_backend_charges_formula() {
        let mut o = quad();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = estimate_gradient(&mut o, &[1.0, 1.0], Backend::Exact, 0.1, 4.0, 3.0, &NormSpec::l2(2), &mut rng, Execution::Sequential)
            .unwrap();
        assert_eq!(e.k, vec![1.0, 3.0]);
        let want = 8 * (72.0 * 2.0 * 16.0 / 0.01f64).ln().ceil() as u64 + 1;
        assert_eq!(o.charged_queries(), want);
        assert_eq!(o.actual_evals(), 0);
    }

    #[test]
    fn finite_differences_on_quadratic() {
        let mut o = quad();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = estimate_gradient(&mut o, &[1.0, -1.0], Backend::FiniteDifference, 0.1, 4.0, 3.0, &NormSpec::l2(2), &mut rng, Execution::Sequential)
            .unwrap();
        assert!((e.k[0] - 1.0).abs() < 1e-8 && (e.k[1] + 3.0).abs() < 1e-8);
        assert_eq!(o.charged_queries(), 4);
        assert_eq!(o.actual_evals(), 4);
    }

    #[test]
    fn surrogate_needs_gradient() {
        let spec = ObjectiveSpec::new("q", 1, 1.0, 2.0, |x| x[0]).unwrap();
        let mut o = NoisyOracle::exact(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = estimate_gradient(&mut o, &[0.0], Backend::Surrogate, 0.1, 1.0, 1.0, &NormSpec::l2(1), &mut rng, Execution::Sequential);
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
