//! Mirror-map setups: Euclidean, negative entropy on the simplex, and
//! negative von Neumann entropy on the spectraplex.

use nalgebra::DMatrix;

use super::linalg::{self, from_flat, reconstruct, spd_log, sym_eig, symmetrize, to_flat};
use crate::error::{check_finite, check_len, Error, Result};
use crate::norms::{lp_norm, NormSpec};
use crate::problem::DomainSpec;

/// Smallest coordinate (or eigenvalue) an entropy iterate may take.
pub const ENTROPY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setup {
    Euclidean,
    SimplexEntropy,
    SpectraplexEntropy,
}

impl std::str::FromStr for Setup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Setup::Euclidean),
            "simplex_entropy" | "entropy" => Ok(Setup::SimplexEntropy),
            "spectraplex_entropy" => Ok(Setup::SpectraplexEntropy),
            _ => Err(Error::Config(format!("unknown geometry {s:?}"))),
        }
    }
}

/// A mirror map Φ with its strong-convexity modulus μ under `norm`.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorGeometry {
    pub setup: Setup,
    /// Length of a point (n² for the spectraplex).
    pub dim: usize,
    /// Matrix side for the spectraplex, 0 otherwise.
    pub side: usize,
    pub mu: f64,
    pub norm: NormSpec,
}

impl MirrorGeometry {
    pub fn euclidean(dim: usize) -> Self {
        MirrorGeometry {
            setup: Setup::Euclidean,
            dim,
            side: 0,
            mu: 1.0,
            norm: NormSpec::l2(dim),
        }
    }

    pub fn simplex_entropy(dim: usize) -> Self {
        MirrorGeometry {
            setup: Setup::SimplexEntropy,
            dim,
            side: 0,
            mu: 1.0,
            norm: NormSpec::l1(dim),
        }
    }

    /// Von Neumann entropy on n×n density matrices; the norm is the trace
    /// norm, recorded as p = 1 on the n eigenvalues.
    pub fn spectraplex_entropy(n: usize) -> Self {
        MirrorGeometry {
            setup: Setup::SpectraplexEntropy,
            dim: n * n,
            side: n,
            mu: 0.5,
            norm: NormSpec::l1(n),
        }
    }

    pub fn for_setup(setup: Setup, dim: usize) -> Result<Self> {
        Ok(match setup {
            Setup::Euclidean => Self::euclidean(dim),
            Setup::SimplexEntropy => Self::simplex_entropy(dim),
            Setup::SpectraplexEntropy => {
                let n = (dim as f64).sqrt().round() as usize;
                if n * n != dim {
                    return Err(Error::Config(format!("spectraplex needs a square length, got {dim}")));
                }
                Self::spectraplex_entropy(n)
            }
        })
    }

    /// The norm under which Φ is μ-strongly convex.
    pub fn primal_norm(&self, x: &[f64]) -> Result<f64> {
        match self.setup {
            Setup::Euclidean => Ok(lp_norm(x, 2.0)),
            Setup::SimplexEntropy => Ok(lp_norm(x, 1.0)),
            Setup::SpectraplexEntropy => linalg::trace_norm(&symmetrize(&from_flat(x, self.side))),
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        check_len(self.dim, x.len())?;
        check_finite(x, "point")
    }

    /// Checks membership in the open set P; `allow_boundary` admits zero
    /// coordinates, where the entropy extends continuously.
    fn check_interior(&self, x: &[f64], allow_boundary: bool) -> Result<()> {
        self.check(x)?;
        match self.setup {
            Setup::Euclidean => Ok(()),
            Setup::SimplexEntropy => {
                let bad = x.iter().any(|v| if allow_boundary { *v < 0.0 } else { *v <= 0.0 });
                if bad {
                    Err(Error::Domain("entropy needs strictly positive coordinates".into()))
                } else {
                    Ok(())
                }
            }
            Setup::SpectraplexEntropy => {
                let e = sym_eig(&from_flat(x, self.side))?;
                let min = e.values[e.values.len() - 1];
                if (allow_boundary && min < -1e-12) || (!allow_boundary && min <= 0.0) {
                    Err(Error::Domain(format!("von Neumann entropy needs a positive definite matrix, λmin = {min:e}")))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn phi(&self, x: &[f64]) -> Result<f64> {
        self.check_interior(x, true)?;
        Ok(match self.setup {
            Setup::Euclidean => 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            Setup::SimplexEntropy => x.iter().map(|v| xlnx(*v)).sum(),
            Setup::SpectraplexEntropy => {
                let e = sym_eig(&from_flat(x, self.side))?;
                e.values.iter().map(|v| xlnx(v.max(0.0))).sum()
            }
        })
    }

    pub fn grad_phi(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_interior(x, false)?;
        Ok(match self.setup {
            Setup::Euclidean => x.to_vec(),
            Setup::SimplexEntropy => x.iter().map(|v| 1.0 + v.ln()).collect(),
            Setup::SpectraplexEntropy => {
                let n = self.side;
                let l = spd_log(&from_flat(x, n))? + DMatrix::identity(n, n);
                to_flat(&l)
            }
        })
    }

    pub fn grad_phi_inverse(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check(y)?;
        Ok(match self.setup {
            Setup::Euclidean => y.to_vec(),
            Setup::SimplexEntropy => y.iter().map(|v| (v - 1.0).exp()).collect(),
            Setup::SpectraplexEntropy => {
                let n = self.side;
                let m = from_flat(y, n) - DMatrix::identity(n, n);
                to_flat(&linalg::spd_exp(&symmetrize(&m))?)
            }
        })
    }

    /// D_Φ(x, x̄). `x` may sit on the boundary of P, `x̄` may not.
    pub fn bregman_divergence(&self, x: &[f64], x_bar: &[f64]) -> Result<f64> {
        self.check_interior(x, true)?;
        self.check_interior(x_bar, false)?;
        Ok(match self.setup {
            Setup::Euclidean => {
                0.5 * x.iter().zip(x_bar).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
            }
            Setup::SimplexEntropy => x
                .iter()
                .zip(x_bar)
                .map(|(a, b)| {
                    let t = if *a == 0.0 { 0.0 } else { a * (a / b).ln() };
                    t - a + b
                })
                .sum::<f64>()
                .max(0.0),
            Setup::SpectraplexEntropy => {
                let n = self.side;
                let xm = symmetrize(&from_flat(x, n));
                let xb = from_flat(x_bar, n);
                let ex = sym_eig(&xm)?;
                let tr_xlogx: f64 = ex.values.iter().map(|v| xlnx(v.max(0.0))).sum();
                let cross = (&xm * spd_log(&xb)?).trace();
                (tr_xlogx - cross - xm.trace() + xb.trace()).max(0.0)
            }
        })
    }

    /// ⟨∇Φ(x) − ∇Φ(x̄), x − w⟩ − [D(x, x̄) + D(w, x) − D(w, x̄)].
    pub fn three_point_identity_residual(&self, x: &[f64], x_bar: &[f64], w: &[f64]) -> Result<f64> {
        let gx = self.grad_phi(x)?;
        let gb = self.grad_phi(x_bar)?;
        self.check(w)?;
        let lhs: f64 = (0..self.dim).map(|i| (gx[i] - gb[i]) * (x[i] - w[i])).sum();
        let rhs = self.bregman_divergence(x, x_bar)? + self.bregman_divergence(w, x)?
            - self.bregman_divergence(w, x_bar)?;
        Ok(lhs - rhs)
    }

    /// argmin over X ∩ P of D_Φ(·, x̄).
    pub fn bregman_project(&self, x_bar: &[f64], domain: &DomainSpec) -> Result<Vec<f64>> {
        check_len(domain.dim(), x_bar.len())?;
        match (self.setup, domain) {
            (Setup::Euclidean, _) => domain.project(x_bar),
            (Setup::SimplexEntropy, DomainSpec::Simplex { scale, .. }) => {
                self.check_interior(x_bar, false)?;
                let s: f64 = x_bar.iter().sum();
                Ok(x_bar.iter().map(|v| (scale * v / s).max(ENTROPY_FLOOR)).collect())
            }
            (Setup::SpectraplexEntropy, DomainSpec::Spectraplex { n }) if *n == self.side => {
                self.check_interior(x_bar, false)?;
                let m = symmetrize(&from_flat(x_bar, *n));
                let t = m.trace();
                Ok(to_flat(&(m / t)))
            }
            (s, d) => Err(Error::Config(format!("no Bregman projection for {s:?} onto {d:?}"))),
        }
    }

    /// Π^Φ(∇Φ⁻¹(∇Φ(x) − ηg)).
    pub fn mirror_step(&self, x: &[f64], g: &[f64], eta: f64, domain: &DomainSpec) -> Result<Vec<f64>> {
        self.check(x)?;
        check_len(self.dim, g.len())?;
        check_finite(g, "gradient")?;
        if !(eta > 0.0) {
            return Err(Error::InvalidInput(format!("step size {eta} must be > 0")));
        }
        match (self.setup, domain) {
            (Setup::Euclidean, _) => {
                let y: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - eta * b).collect();
                domain.project(&y)
            }
            (Setup::SimplexEntropy, DomainSpec::Simplex { scale, .. }) => {
                self.check_interior(x, false)?;
                // ∇Φ(x) − ηg, shifted by its max; the shift and the +1 of ∇Φ
                // cancel in the renormalization
                let y: Vec<f64> = x.iter().zip(g).map(|(a, b)| a.ln() - eta * b).collect();
                Ok(normalized_exp(&y, *scale))
            }
            (Setup::SpectraplexEntropy, DomainSpec::Spectraplex { n }) if *n == self.side => {
                self.check_interior(x, false)?;
                let y = spd_log(&from_flat(x, *n))? - symmetrize(&from_flat(g, *n)) * eta;
                Ok(to_flat(&normalized_matrix_exp(&y)?))
            }
            (s, d) => Err(Error::Config(format!("no mirror step for {s:?} on {d:?}"))),
        }
    }
}

fn xlnx(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

/// scale·exp(y)/Σexp(y), computed with max-subtraction and floored at
/// [`ENTROPY_FLOOR`].
pub fn normalized_exp(y: &[f64], scale: f64) -> Vec<f64> {
    let m = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = y.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|v| (scale * v / s).max(ENTROPY_FLOOR)).collect()
}

/// exp(Y)/tr exp(Y) in the eigenbasis of Y.
pub fn normalized_matrix_exp(y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let e = sym_eig(&symmetrize(y))?;
    let lam = normalized_exp(e.values.as_slice(), 1.0);
    Ok(reconstruct(&e.vectors, &lam))
}
