//! Exact statevector emulation of Jordan's gradient algorithm.

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;

use super::surrogate::{surrogate_charge, surrogate_scaled};
use super::{coordinate_median, Backend, GradientEstimate, DEFAULT_STATE_CAP};
use crate::error::{check_finite, check_len, Error, Result};
use crate::norms::NormSpec;
use crate::oracle::NoisyOracle;
use crate::par::Execution;

/// A b-bit hypergrid of B^d points y + r·x with x on the centered grid
/// {(j + ½)/B − ½}.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub bits: u32,
    pub points: usize,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl GridSpec {
    pub fn new(bits: u32, center: Vec<f64>, radius: f64, cap: usize) -> Result<Self> {
        if bits == 0 || bits > 30 {
            return Err(Error::InvalidInput(format!("grid bits {bits} outside 1..=30")));
        }
        if center.is_empty() {
            return Err(Error::InvalidInput("grid dimension must be positive".into()));
        }
        check_finite(&center, "grid center")?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("grid radius {radius} must be > 0")));
        }
        let points = 1usize << bits;
        let total = (points as u128).checked_pow(center.len() as u32);
        match total {
            Some(t) if t <= cap as u128 => {}
            _ => {
                return Err(Error::Resource(format!(
                    "statevector of {points}^{} amplitudes exceeds cap {cap}",
                    center.len()
                )))
            }
        }
        Ok(GridSpec {
            bits,
            points,
            center,
            radius,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Centered coordinate of register value j.
    pub fn axis_point(&self, j: usize) -> f64 {
        (j as f64 + 0.5) / self.points as f64 - 0.5
    }

    /// Register values of a flat index; axis 0 is the most significant.
    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.points;
            idx /= self.points;
        }
        out
    }

    /// The evaluation point y + r·x for a flat index.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        self.digits(idx)
            .iter()
            .zip(&self.center)
            .map(|(&j, c)| c + self.radius * self.axis_point(j))
            .collect()
    }

    /// Centered frequency m/B or (m − B)/B.
    pub fn centered(&self, m: usize) -> f64 {
        let b = self.points as f64;
        if m < self.points / 2 {
            m as f64 / b
        } else {
            (m as f64 - b) / b
        }
    }
}

/// Prepares Σ_x exp(2πi·B·f̃(y + r·x)/(3Gr))|x⟩/√(B^d).
///
/// The factor B makes a gradient g with g/(3G) ∈ (1/B)ℤ an exact tone of the
/// index-space Fourier transform. Charges one query and B^d evaluations.
pub fn build_phase_state(
    oracle: &mut NoisyOracle,
    grid: &GridSpec,
    lipschitz: f64,
    exec: Execution,
) -> Result<Vec<Complex64>> {
    check_len(oracle.dim(), grid.dim())?;
    if !(lipschitz > 0.0) {
        return Err(Error::InvalidInput(format!("G = {lipschitz} must be > 0")));
    }
    let n = grid.len();
    let points: Vec<Vec<f64>> = (0..n).map(|i| grid.point(i)).collect();
    let values = oracle.evaluate_batch(&points, exec)?;
    oracle.charge_queries(1);
    let scale = grid.points as f64 / (3.0 * lipschitz * grid.radius);
    let amp = 1.0 / (n as f64).sqrt();
    Ok(values
        .iter()
        .map(|f| {
            let cycles = f * scale;
            let frac = cycles - cycles.round();
            Complex64::from_polar(amp, 2.0 * std::f64::consts::PI * frac)
        })
        .collect())
}

/// Outcome distribution after the per-register Fourier transform with kernel
/// e^{−2πi·jm/B}/√B.
pub fn fourier_probabilities(state: &[Complex64], grid: &GridSpec) -> Result<Vec<f64>> {
    check_len(grid.len(), state.len())?;
    let norm2: f64 = state.iter().map(|a| a.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("state has squared norm {norm2}, expected 1")));
    }
    let b = grid.points;
    let d = grid.dim();
    let mut buf = state.to_vec();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(b);
    let mut line = vec![Complex64::new(0.0, 0.0); b];
    let s = 1.0 / (b as f64).sqrt();
    for axis in 0..d {
        let stride = b.pow((d - 1 - axis) as u32);
        let block = stride * b;
        for base in (0..buf.len()).step_by(block) {
            for off in 0..stride {
                let start = base + off;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = buf[start + j * stride];
                }
                fft.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    buf[start + j * stride] = v * s;
                }
            }
        }
    }
    Ok(buf.iter().map(|a| a.norm_sqr()).collect())
}

/// Draws a flat outcome index from a probability vector.
pub fn sample_outcome<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, p) in probs.iter().enumerate() {
        if u < *p {
            return i;
        }
        u -= p;
    }
    // rounding left u marginally positive; return the last supported index
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
}

/// The gradient k = 3G·c read off measurement outcome `idx`.
pub fn decode_outcome(grid: &GridSpec, idx: usize, lipschitz: f64) -> Vec<f64> {
    grid.digits(idx)
        .iter()
        .map(|&m| 3.0 * lipschitz * grid.centered(m))
        .collect()
}

/// Fourier-transforms each register, measures, and returns k = 3G·c.
pub fn jordan_measure<R: Rng + ?Sized>(
    state: &[Complex64],
    grid: &GridSpec,
    lipschitz: f64,
    rng: &mut R,
) -> Result<GradientEstimate> {
    let probs = fourier_probabilities(state, grid)?;
    let idx = sample_outcome(&probs, rng);
    let mut est = GradientEstimate::new(decode_outcome(grid, idx, lipschitz), Backend::Statevector, 1);
    est.sigma = 3.0 * lipschitz / grid.points as f64;
    Ok(est)
}

fn repetitions(dim: usize, lipschitz: f64, sigma: f64) -> u64 {
    surrogate_charge(dim, sigma / (3.0 * lipschitz))
}

/// Largest θ for which the phase error of the prepared state stays within
/// the tolerance σ'²/(32⌈ln(8d/σ'²)⌉ + 4), σ' = σ/(3G), at the radius
/// r = √(2θ)/(√L·ϑ) on a grid of B points per axis.
pub fn statevector_theta_budget(lipschitz: f64, smoothness: f64, sigma: f64, norms: &NormSpec, points: usize) -> f64 {
    let tol = phase_tolerance(lipschitz, sigma, norms.dim);
    // phase error ≤ 2πB·(5θ/4)/(3Gr) = 5πB·ϑ·√(Lθ)/(6√2·G)
    let c = 5.0 * std::f64::consts::PI * points as f64 * norms.vartheta / (6.0 * 2f64.sqrt() * lipschitz);
    (tol / c).powi(2) / smoothness
}

fn phase_tolerance(lipschitz: f64, sigma: f64, dim: usize) -> f64 {
    let sp = sigma / (3.0 * lipschitz);
    sp * sp / (32.0 * (8.0 * dim as f64 / (sp * sp)).ln().ceil() + 4.0)
}

/// Grid radius: r = √(2θ)/(√L·ϑ) for θ > 0. For an exact oracle only the
/// Taylor term 2πB·Lr·ϑ²/(24G) remains, and r is the largest radius keeping
/// it within the phase tolerance.
pub fn statevector_radius(theta: f64, lipschitz: f64, smoothness: f64, sigma: f64, norms: &NormSpec, points: usize) -> f64 {
    if theta > 0.0 {
        (2.0 * theta).sqrt() / (smoothness.sqrt() * norms.vartheta)
    } else {
        let tol = phase_tolerance(lipschitz, sigma, norms.dim);
        24.0 * lipschitz * tol
            / (2.0 * std::f64::consts::PI * points as f64 * smoothness * norms.vartheta * norms.vartheta)
    }
}

/// Median of N = 8⌈ln(72dG²/σ²)⌉ + 1 Jordan measurements on a grid of
/// b = ⌈log₂(12G/σ)⌉ bits and radius [`statevector_radius`].
///
/// The N copies are identical, so the state is prepared once and sampled N
/// times; N queries are charged. Falls back to the surrogate when B^d
/// exceeds `cap`.
#[allow(clippy::too_many_arguments)]
pub fn suppressed_bias_estimate<R: Rng + ?Sized>(
    oracle: &mut NoisyOracle,
    y: &[f64],
    lipschitz: f64,
    smoothness: f64,
    sigma: f64,
    norms: &NormSpec,
    rng: &mut R,
    cap: Option<usize>,
    exec: Execution,
) -> Result<GradientEstimate> {
    check_len(oracle.dim(), y.len())?;
    check_finite(y, "point")?;
    if !(lipschitz > 0.0) || !(smoothness > 0.0) {
        return Err(Error::InvalidInput("G and L must be positive".into()));
    }
    if !(sigma > 0.0) || sigma > lipschitz {
        return Err(Error::InvalidInput(format!(
            "sigma = {sigma} must lie in (0, G] with G = {lipschitz}"
        )));
    }
    let d = y.len();
    let bits = (12.0 * lipschitz / sigma).log2().ceil().max(1.0) as u32;
    let n = repetitions(d, lipschitz, sigma);
    let points = 1usize << bits.min(30);
    let radius = statevector_radius(oracle.theta(), lipschitz, smoothness, sigma, norms, points);
    let budget = statevector_theta_budget(lipschitz, smoothness, sigma, norms, points);
    let budget_exceeded = oracle.theta() > budget;
    if budget_exceeded {
        log::warn!("theta {} exceeds the statevector budget {budget:e}", oracle.theta());
    }
    let grid = match GridSpec::new(bits, y.to_vec(), radius, cap.unwrap_or(DEFAULT_STATE_CAP)) {
        Ok(g) => g,
        Err(Error::Resource(msg)) => {
            log::debug!("statevector downgraded to surrogate: {msg}");
            let g = oracle.base().gradient(y).ok_or_else(|| {
                Error::Resource(format!("{msg}; surrogate fallback needs an exact gradient"))
            })?;
            let mut est = surrogate_scaled(&g, sigma, lipschitz, oracle.seed(), rng);
            oracle.charge_queries(est.charged_queries);
            est.downgraded = true;
            est.budget_exceeded = budget_exceeded;
            return Ok(est);
        }
        Err(e) => return Err(e),
    };
    let before = oracle.actual_evals();
    let state = build_phase_state(oracle, &grid, lipschitz, exec)?;
    oracle.charge_queries(n - 1);
    let probs = fourier_probabilities(&state, &grid)?;
    let samples: Vec<Vec<f64>> = (0..n)
        .map(|_| decode_outcome(&grid, sample_outcome(&probs, rng), lipschitz))
        .collect();
    let sp = sigma / (3.0 * lipschitz);
    let mut est = GradientEstimate::new(coordinate_median(&samples), Backend::Statevector, n);
    est.sigma = sigma;
    est.delta = sigma;
    est.rho = 0.75 * sp * sp;
    est.actual_evals = oracle.actual_evals() - before;
    est.budget_exceeded = budget_exceeded;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ObjectiveSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn linear(g: Vec<f64>) -> NoisyOracle {
        let d = g.len();
        let spec = ObjectiveSpec::new("lin", d, 1.0, f64::INFINITY, move |x| {
            x.iter().zip(&g).map(|(a, b)| a * b).sum()
        })
        .unwrap();
        NoisyOracle::exact(spec)
    }

    #[test]
    fn grid_is_centered() {
        let g = GridSpec::new(2, vec![0.0], 1.0, 1 << 22).unwrap();
        let pts: Vec<f64> = (0..4).map(|j| g.axis_point(j)).collect();
        assert_eq!(pts, vec![-0.375, -0.125, 0.125, 0.375]);
        assert_eq!(g.centered(1), 0.25);
        assert_eq!(g.centered(2), -0.5);
        assert_eq!(g.centered(3), -0.25);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            GridSpec::new(12, vec![0.0; 2], 1.0, 1 << 22),
            Err(Error::Resource(_))
        ));
        assert!(GridSpec::new(11, vec![0.0; 2], 1.0, 1 << 22).is_ok());
    }

    #[test]
    fn phase_state_of_constant() {
        let spec = ObjectiveSpec::new("c", 2, 1.0, 2.0, |_| 0.3).unwrap();
        let mut o = NoisyOracle::exact(spec);
        let g = GridSpec::new(2, vec![0.0; 2], 0.5, 1 << 22).unwrap();
        let s = build_phase_state(&mut o, &g, 1.0, Execution::Sequential).unwrap();
        assert_eq!(o.actual_evals(), 16);
        assert_eq!(o.charged_queries(), 1);
        for a in &s {
            assert!((a - s[0]).norm() < 1e-15);
            assert!((a.norm() - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn pure_linear_phase() {
        // f̃(y + r·x) = 3Gr·x/B gives amplitudes e^{2πi·x_j}/2
        let (g_lip, r, b) = (1.0, 0.5, 4.0);
        let mut o = linear(vec![3.0 * g_lip / b]);
        let grid = GridSpec::new(2, vec![0.0], r, 1 << 22).unwrap();
        let s = build_phase_state(&mut o, &grid, g_lip, Execution::Sequential).unwrap();
        for (j, a) in s.iter().enumerate() {
            let want = Complex64::from_polar(0.5, 2.0 * std::f64::consts::PI * grid.axis_point(j));
            assert!((a - want).norm() < 1e-14, "j = {j}: {a} vs {want}");
        }
    }

    #[test]
    fn on_grid_tones_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // d = 1, b = 3, g/(3G) = 1/8
        let mut o = linear(vec![3.0 / 8.0]);
        let grid = GridSpec::new(3, vec![0.2], 0.7, 1 << 22).unwrap();
        let s = build_phase_state(&mut o, &grid, 1.0, Execution::Sequential).unwrap();
        let p = fourier_probabilities(&s, &grid).unwrap();
        assert!((p[1] - 1.0).abs() < 1e-12);
        let k = jordan_measure(&s, &grid, 1.0, &mut rng).unwrap().k;
        assert!((k[0] - 3.0 / 8.0).abs() < 1e-12);
        // d = 2, b = 4, g/(3G) = (3/16, −2/16)
        let mut o = linear(vec![9.0 / 16.0, -6.0 / 16.0]);
        let grid = GridSpec::new(4, vec![0.0, 1.0], 0.3, 1 << 22).unwrap();
        let s = build_phase_state(&mut o, &grid, 1.0, Execution::Sequential).unwrap();
        for _ in 0..20 {
            let k = jordan_measure(&s, &grid, 1.0, &mut rng).unwrap().k;
            assert!((k[0] - 9.0 / 16.0).abs() < 1e-12 && (k[1] + 6.0 / 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let grid = GridSpec::new(1, vec![0.0], 1.0, 1 << 22).unwrap();
        let s = vec![Complex64::new(1.0, 0.0); 2];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(jordan_measure(&s, &grid, 1.0, &mut rng), Err(Error::InvalidState(_))));
    }

    #[test]
    fn suppressed_bias_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // b = ⌈log₂ 120⌉ = 7; g/(3G) = 5/128 is on-grid
        let g = vec![15.0 / 128.0, -30.0 / 128.0];
        let mut o = linear(g.clone());
        let est = suppressed_bias_estimate(&mut o, &[0.1, 0.2], 1.0, 1.0, 0.1, &NormSpec::l2(2), &mut rng, None, Execution::Sequential)
            .unwrap();
        assert_eq!(est.k, g);
        let n = 8 * (72.0 * 2.0 / 0.01f64).ln().ceil() as u64 + 1;
        assert_eq!(est.charged_queries, n);
        assert_eq!(o.charged_queries(), n);
        assert_eq!(o.actual_evals(), 128 * 128);
    }

    #[test]
    fn sigma_precondition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut o = linear(vec![0.0]);
        let r = suppressed_bias_estimate(&mut o, &[0.0], 1.0, 1.0, 3.5, &NormSpec::l2(1), &mut rng, None, Execution::Sequential);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn downgrade_without_gradient_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut o = linear(vec![0.0; 6]);
        let r = suppressed_bias_estimate(&mut o, &[0.0; 6], 1.0, 1.0, 0.1, &NormSpec::l2(6), &mut rng, None, Execution::Sequential);
        assert!(matches!(r, Err(Error::Resource(_))));
    }
}
