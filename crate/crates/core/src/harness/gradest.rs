//! Monte-Carlo bias and second-moment audits of gradient backends.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::norms::NormSpec;
use crate::oracle::{mix64, NoiseMode, NoisyOracle};
use crate::par::{self, Execution};
use crate::problem::ObjectiveSpec;
use crate::qgrad::{estimate_gradient, Backend};

/// Empirical moments of k − ∇f(x) over independent draws.
#[derive(Debug, Clone, PartialEq)]
pub struct GradStats {
    pub draws: usize,
    pub sigma: f64,
    /// Per-coordinate |E[k] − g|.
    pub bias: Vec<f64>,
    /// Per-coordinate standard error of the mean.
    pub bias_se: Vec<f64>,
    /// E‖k − g‖∞².
    pub second_moment: f64,
    pub second_moment_se: f64,
    pub charged_per_draw: u64,
}

impl GradStats {
    pub fn max_bias(&self) -> f64 {
        self.bias.iter().copied().fold(0.0, f64::max)
    }

    /// max_i |E[k_i] − g_i| ≤ 3σ²/4 + z·SE_i for every coordinate.
    pub fn bias_within(&self, z: f64) -> bool {
        let bound = 0.75 * self.sigma * self.sigma;
        self.bias.iter().zip(&self.bias_se).all(|(b, se)| *b <= bound + z * se)
    }

    /// E‖k − g‖∞² ≤ σ² + z·SE.
    pub fn second_moment_within(&self, z: f64) -> bool {
        self.second_moment <= self.sigma * self.sigma + z * self.second_moment_se
    }
}

/// Draws `draws` estimates at x; draw i uses its own rng seeded from
/// (seed, i), so results do not depend on the execution mode.
#[allow(clippy::too_many_arguments)]
pub fn gradient_statistics(
    problem: &ObjectiveSpec,
    x: &[f64],
    backend: Backend,
    sigma: f64,
    theta: f64,
    draws: usize,
    seed: u64,
    exec: Execution,
) -> Result<GradStats> {
    if draws < 2 {
        return Err(Error::InvalidInput("need at least 2 draws".into()));
    }
    let g = problem
        .gradient(x)
        .ok_or_else(|| Error::Config(format!("{} has no exact gradient to compare against", problem.name)))?;
    let l = problem.smoothness.unwrap_or(1.0);
    let norms = NormSpec::l2(problem.dim);
    let oracle = NoisyOracle::new(problem.clone(), theta, NoiseMode::Hash, seed)?;
    let samples = par::try_map_range(exec, draws, |i| {
        let mut o = oracle.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ mix64(i as u64)));
        let est = estimate_gradient(&mut o, x, backend, sigma, problem.lipschitz, l, &norms, &mut rng, Execution::Sequential)?;
        Ok::<_, Error>((est.k, o.charged_queries()))
    })?;
    let n = draws as f64;
    let d = g.len();
    let mut mean = vec![0.0; d];
    let mut sq = vec![0.0; d];
    let mut inf2 = Vec::with_capacity(draws);
    for (k, _) in &samples {
        let mut m = 0.0f64;
        for i in 0..d {
            let e = k[i] - g[i];
            mean[i] += e;
            sq[i] += e * e;
            m = m.max(e.abs());
        }
        inf2.push(m * m);
    }
    let bias: Vec<f64> = mean.iter().map(|s| (s / n).abs()).collect();
    let bias_se: Vec<f64> = (0..d)
        .map(|i| {
            let mu = mean[i] / n;
            ((sq[i] / n - mu * mu).max(0.0) * n / (n - 1.0) / n).sqrt()
        })
        .collect();
    let m2 = inf2.iter().sum::<f64>() / n;
    let var = inf2.iter().map(|v| (v - m2).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(GradStats {
        draws,
        sigma,
        bias,
        bias_se,
        second_moment: m2,
        second_moment_se: (var / n).sqrt(),
        charged_per_draw: samples[0].1,
    })
}
