//! ℓp norms, dual exponents and the norm-equivalence constants ϑ, ϑ*.

use crate::error::{Error, Result};

/// Hölder conjugate q of p, with 1/p + 1/q = 1.
pub fn dual_exponent(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidInput(format!("norm exponent p = {p} must be >= 1")));
    }
    if p == 1.0 {
        Ok(f64::INFINITY)
    } else if p.is_infinite() {
        Ok(1.0)
    } else {
        Ok(p / (p - 1.0))
    }
}

/// ‖x‖_p for p ∈ [1, ∞].
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    } else if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// A p-norm on ℝ^d together with its dual exponent and the constants with
/// ‖x‖_p ≤ ϑ‖x‖_∞ and ‖x‖_q ≤ ϑ*‖x‖_∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub p: f64,
    pub q: f64,
    pub dim: usize,
    pub vartheta: f64,
    pub vartheta_star: f64,
}

impl NormSpec {
    pub fn new(p: f64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let q = dual_exponent(p)?;
        let d = dim as f64;
        let pow = |e: f64| {
            if e.is_infinite() {
                1.0
            } else if e == 2.0 {
                d.sqrt()
            } else {
                d.powf(1.0 / e)
            }
        };
        Ok(NormSpec {
            p,
            q,
            dim,
            vartheta: pow(p),
            vartheta_star: pow(q),
        })
    }

    pub fn l1(dim: usize) -> Self {
        Self::new(1.0, dim).expect("valid")
    }

    pub fn l2(dim: usize) -> Self {
        Self::new(2.0, dim).expect("valid")
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        lp_norm(x, self.p)
    }

    pub fn dual_norm(&self, x: &[f64]) -> f64 {
        lp_norm(x, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_exponents() {
        assert_eq!(dual_exponent(2.0).unwrap(), 2.0);
        assert_eq!(dual_exponent(1.0).unwrap(), f64::INFINITY);
        assert!((dual_exponent(4.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(dual_exponent(f64::INFINITY).unwrap(), 1.0);
        assert!(dual_exponent(0.5).is_err());
    }

    #[test]
    fn equivalence_constants() {
        let n = NormSpec::new(2.0, 9).unwrap();
        assert_eq!((n.vartheta, n.vartheta_star), (3.0, 3.0));
        let n = NormSpec::new(1.0, 7).unwrap();
        assert_eq!((n.vartheta, n.vartheta_star), (7.0, 1.0));
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let n = NormSpec::new(p, 5).unwrap();
            assert!((n.vartheta * n.vartheta_star - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norms() {
        let x = [3.0, -4.0];
        assert_eq!(lp_norm(&x, 1.0), 7.0);
        assert_eq!(lp_norm(&x, 2.0), 5.0);
        assert_eq!(lp_norm(&x, f64::INFINITY), 4.0);
        assert!((lp_norm(&x, 3.0) - 91f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }
}
