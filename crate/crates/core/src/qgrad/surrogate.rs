//! Statistical surrogate for the suppressed-bias estimator.

use rand::Rng;

use super::{Backend, GradientEstimate};
use crate::oracle::{hash_to_unit, mix64};

/// 8⌈ln(8d/σ²)⌉ + 1 queries, or 1 for σ = 0.
pub fn surrogate_charge(dim: usize, sigma: f64) -> u64 {
    if sigma <= 0.0 {
        return 1;
    }
    let c = (8.0 * dim as f64 / (sigma * sigma)).ln().ceil().max(0.0);
    8 * c as u64 + 1
}

/// k = g + b + n with a fixed bias ‖b‖∞ ≤ 3σ²/4 determined by `bias_seed`,
/// and n uniform on [−σ/2, σ/2]^d except, with probability 3σ²/4, uniform on
/// [−σ, σ]^d.
pub fn surrogate_gradient<R: Rng + ?Sized>(
    exact_grad: &[f64],
    sigma: f64,
    bias_seed: u64,
    rng: &mut R,
) -> GradientEstimate {
    let d = exact_grad.len();
    let charge = surrogate_charge(d, sigma);
    if sigma <= 0.0 {
        return GradientEstimate::new(exact_grad.to_vec(), Backend::Surrogate, charge);
    }
    let delta = 0.75 * sigma * sigma;
    let failed = rng.gen::<f64>() < delta.min(1.0);
    let half = if failed { sigma } else { 0.5 * sigma };
    let root = mix64(bias_seed ^ 0xB1A5_B1A5_B1A5_B1A5);
    let k = exact_grad
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let b = delta * hash_to_unit(mix64(root ^ i as u64));
            g + b + rng.gen_range(-half..=half)
        })
        .collect();
    let mut est = GradientEstimate::new(k, Backend::Surrogate, charge);
    est.sigma = sigma;
    est.delta = delta;
    est.rho = delta.min(1.0);
    est.failed = failed;
    est
}

/// Surrogate in units of 3G: k = 3G·surrogate(g/3G, σ/3G), clipped to
/// [−3G/2, 3G/2]^d. Charges 8⌈ln(72dG²/σ²)⌉ + 1.
pub(crate) fn surrogate_scaled<R: Rng + ?Sized>(
    grad: &[f64],
    sigma: f64,
    lipschitz: f64,
    bias_seed: u64,
    rng: &mut R,
) -> GradientEstimate {
    let s = 3.0 * lipschitz;
    let g: Vec<f64> = grad.iter().map(|v| v / s).collect();
    let mut est = surrogate_gradient(&g, sigma / s, bias_seed, rng);
    for v in est.k.iter_mut() {
        *v = (*v * s).clamp(-0.5 * s, 0.5 * s);
    }
    est.sigma = sigma;
    est.delta *= s;
    est
}
