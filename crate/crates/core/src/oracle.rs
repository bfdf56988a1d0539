//! θ-approximate evaluation oracle with query accounting.

use std::sync::Arc;

use crate::error::{check_finite, check_len, Error, Result};
use crate::par::{self, Execution};
use crate::problem::ObjectiveSpec;

/// How the fixed perturbation η(x) = f̃(x) − f(x) is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    None,
    /// Uniform in (−θ, θ), derived from a 64-bit hash of (seed, bits of x).
    Hash,
    /// 0.9·θ·sin(ω₀·Σᵢ xᵢ) with ω₀ = 10³.
    Sinusoid,
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NoiseMode::None),
            "hash" => Ok(NoiseMode::Hash),
            "sinusoid" => Ok(NoiseMode::Sinusoid),
            _ => Err(Error::Config(format!("unknown noise mode {s:?}"))),
        }
    }
}

pub const SINUSOID_FREQUENCY: f64 = 1e3;
pub const SINUSOID_AMPLITUDE: f64 = 0.9;

/// splitmix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Maps a hash to a value strictly inside (−1, 1).
pub fn hash_to_unit(h: u64) -> f64 {
    let u = ((h >> 12) as f64 + 0.5) / (1u64 << 52) as f64;
    2.0 * u - 1.0
}

/// Oracle for f̃ with ‖f̃ − f‖∞ < θ. f̃ is a fixed function of x.
#[derive(Debug, Clone)]
pub struct NoisyOracle {
    base: Arc<ObjectiveSpec>,
    theta: f64,
    mode: NoiseMode,
    seed: u64,
    charged: u64,
    actual: u64,
}

impl NoisyOracle {
    pub fn new(base: ObjectiveSpec, theta: f64, mode: NoiseMode, seed: u64) -> Result<Self> {
        Self::shared(Arc::new(base), theta, mode, seed)
    }

    pub fn shared(base: Arc<ObjectiveSpec>, theta: f64, mode: NoiseMode, seed: u64) -> Result<Self> {
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::InvalidInput(format!("theta = {theta} must be finite and >= 0")));
        }
        Ok(NoisyOracle {
            base,
            theta,
            mode,
            seed,
            charged: 0,
            actual: 0,
        })
    }

    pub fn exact(base: ObjectiveSpec) -> Self {
        Self::new(base, 0.0, NoiseMode::None, 0).expect("valid")
    }

    pub fn base(&self) -> &ObjectiveSpec {
        &self.base
    }

    pub fn base_arc(&self) -> Arc<ObjectiveSpec> {
        Arc::clone(&self.base)
    }

    pub fn dim(&self) -> usize {
        self.base.dim
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn charged_queries(&self) -> u64 {
        self.charged
    }

    pub fn actual_evals(&self) -> u64 {
        self.actual
    }

    /// The perturbation η(x), a pure function of (x, seed, mode).
    pub fn noise(&self, x: &[f64]) -> f64 {
        if self.theta == 0.0 {
            return 0.0;
        }
        match self.mode {
            NoiseMode::None => 0.0,
            NoiseMode::Hash => {
                let mut h = mix64(self.seed);
                for v in x {
                    // +0.0 and −0.0 are the same point
                    let bits = if *v == 0.0 { 0 } else { v.to_bits() };
                    h = mix64(h ^ bits);
                }
                0.999 * self.theta * hash_to_unit(h)
            }
            NoiseMode::Sinusoid => {
                let s: f64 = x.iter().sum();
                SINUSOID_AMPLITUDE * self.theta * (SINUSOID_FREQUENCY * s).sin()
            }
        }
    }

    /// f̃(x) without touching the counters.
    pub fn perturbed_value(&self, x: &[f64]) -> f64 {
        let f = self.base.value(x);
        let g = f + self.noise(x);
        // rounding in f + η must not push the error to θ or beyond
        if (g - f).abs() < self.theta || g == f {
            g
        } else {
            f
        }
    }

    /// f̃(x); counts one actual evaluation.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        check_len(self.base.dim, x.len())?;
        check_finite(x, "query point")?;
        self.actual += 1;
        Ok(self.perturbed_value(x))
    }

    /// f̃ at many points; counts one actual evaluation per point.
    pub fn evaluate_batch(&mut self, points: &[Vec<f64>], mode: Execution) -> Result<Vec<f64>> {
        for p in points {
            check_len(self.base.dim, p.len())?;
            check_finite(p, "query point")?;
        }
        self.actual += points.len() as u64;
        let this = &*self;
        Ok(par::map_slice(mode, points, |p| this.perturbed_value(p)))
    }

    /// Records `n` quantum queries prescribed by a theorem.
    pub fn charge_queries(&mut self, n: u64) {
        self.charged += n;
    }

    /// Exact f(x), uncounted. For traces and tests only.
    pub fn exact_value(&self, x: &[f64]) -> f64 {
        self.base.value(x)
    }
}
