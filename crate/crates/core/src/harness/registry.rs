//! Built-in test problems.

use crate::error::{Error, Result};
use crate::problem::{DomainSpec, ObjectiveSpec};
use crate::solvers::Method;

pub const BUILTIN_NAMES: [&str; 6] = [
    "quadratic",
    "linear-simplex",
    "linf-center",
    "log-sum-exp",
    "matching-pennies",
    "rps",
];

/// A problem with the start point and level-set radius its solvers need.
#[derive(Debug, Clone)]
pub struct BuiltinProblem {
    pub spec: ObjectiveSpec,
    pub x0: Option<Vec<f64>>,
    /// ‖x₀ − x⋆‖₂, when known.
    pub radius: Option<f64>,
}

pub fn default_method(name: &str) -> Result<Method> {
    Ok(match name {
        "quadratic" => Method::QgdPl,
        "linear-simplex" | "matching-pennies" | "rps" => Method::Qmd,
        "linf-center" => Method::Qpsm,
        "log-sum-exp" => Method::Qmp,
        _ => return Err(unknown(name)),
    })
}

fn unknown(name: &str) -> Error {
    Error::Config(format!("unknown problem {name:?}; built-ins are {}", BUILTIN_NAMES.join(", ")))
}

/// Eigenvalues κ^{i/(d−1)}, i = 0..d−1, so μ = 1 and L = κ.
pub fn quadratic_spectrum(dim: usize, kappa: f64) -> Vec<f64> {
    if dim == 1 {
        return vec![1.0];
    }
    (0..dim).map(|i| kappa.powf(i as f64 / (dim - 1) as f64)).collect()
}

/// f(x) = ½ Σ λᵢxᵢ² from x₀ = 1 with f⋆ = 0; G = √(2L·f(x₀)) bounds ‖∇f‖₂
/// on the initial sublevel set.
pub fn quadratic(dim: usize, kappa: f64) -> Result<BuiltinProblem> {
    if !(kappa >= 1.0) {
        return Err(Error::Config(format!("kappa = {kappa} must be >= 1")));
    }
    let lam = quadratic_spectrum(dim, kappa);
    let l = lam.iter().copied().fold(0.0, f64::max);
    let f0 = 0.5 * lam.iter().sum::<f64>();
    let lv = lam.clone();
    let lg = lam.clone();
    let spec = ObjectiveSpec::new("quadratic", dim, (2.0 * l * f0).sqrt(), 2.0, move |x| {
        0.5 * x.iter().zip(&lv).map(|(v, l)| l * v * v).sum::<f64>()
    })?
    .with_gradient(move |x| x.iter().zip(&lg).map(|(v, l)| l * v).collect())
    .with_smoothness(l)?
    .with_pl(1.0)?
    .with_f_star(0.0);
    Ok(BuiltinProblem {
        spec,
        x0: Some(vec![1.0; dim]),
        radius: Some((dim as f64).sqrt()),
    })
}

/// f(x) = Σ cᵢxᵢ with cᵢ = i/(d−1) on the unit simplex; f⋆ = 0 at e₀.
pub fn linear_simplex(dim: usize) -> Result<BuiltinProblem> {
    if dim < 2 {
        return Err(Error::Config("linear-simplex needs dim >= 2".into()));
    }
    let c: Vec<f64> = (0..dim).map(|i| i as f64 / (dim - 1) as f64).collect();
    let cv = c.clone();
    let spec = ObjectiveSpec::new("linear-simplex", dim, 1.0, 1.0, move |x| {
        x.iter().zip(&cv).map(|(a, b)| a * b).sum()
    })?
    .with_gradient(move |_| c.clone())
    .with_domain(DomainSpec::unit_simplex(dim))?
    .with_f_star(0.0);
    Ok(BuiltinProblem {
        spec,
        x0: None,
        radius: None,
    })
}

/// f(x) = ‖x − c‖∞ with cᵢ = ±½ on the box [−1, 1]^d; f⋆ = 0.
pub fn linf_center(dim: usize) -> Result<BuiltinProblem> {
    let c: Vec<f64> = (0..dim).map(|i| if i % 2 == 0 { 0.5 } else { -0.5 }).collect();
    let r = crate::norms::lp_norm(&c, 2.0);
    let spec = ObjectiveSpec::new("linf-center", dim, 1.0, 2.0, move |x| {
        x.iter().zip(&c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    })?
    .with_domain(DomainSpec::boxed(vec![-1.0; dim], vec![1.0; dim])?)?
    .with_f_star(0.0);
    Ok(BuiltinProblem {
        spec,
        x0: None,
        radius: Some(r),
    })
}

/// f(x) = ln Σ exp(xᵢ) + ⟨c, x⟩ with cᵢ = i/2 on the unit simplex. The
/// minimizer is e₀ with f⋆ = ln(e + d − 1); L = 1 under ℓ1.
pub fn log_sum_exp(dim: usize) -> Result<BuiltinProblem> {
    if dim < 2 {
        return Err(Error::Config("log-sum-exp needs dim >= 2".into()));
    }
    let c: Vec<f64> = (0..dim).map(|i| 0.5 * i as f64).collect();
    let cv = c.clone();
    let lse = |x: &[f64]| {
        let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
    };
    let spec = ObjectiveSpec::new("log-sum-exp", dim, 1.0 + c[dim - 1], 1.0, move |x| {
        lse(x) + x.iter().zip(&cv).map(|(a, b)| a * b).sum::<f64>()
    })?
    .with_gradient(move |x| {
        let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = x.iter().map(|v| (v - m).exp()).collect();
        let s: f64 = w.iter().sum();
        w.iter().zip(&c).map(|(wi, ci)| wi / s + ci).collect()
    })
    .with_smoothness(1.0)?
    .with_domain(DomainSpec::unit_simplex(dim))?
    .with_f_star((std::f64::consts::E + (dim - 1) as f64).ln());
    Ok(BuiltinProblem {
        spec,
        x0: None,
        radius: None,
    })
}

/// f(x) = max_i (Ax)_i on the simplex: the column player's loss in a game.
pub fn game(name: &str, a: Vec<Vec<f64>>, value: f64) -> Result<BuiltinProblem> {
    let n = a[0].len();
    let g = a.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let spec = ObjectiveSpec::new(name, n, g, 1.0, move |x| {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    })?
    .with_domain(DomainSpec::unit_simplex(n))?
    .with_f_star(value);
    Ok(BuiltinProblem {
        spec,
        x0: None,
        radius: None,
    })
}

/// Looks up a built-in by name. `dim` is ignored by the games.
pub fn builtin(name: &str, dim: usize, kappa: f64) -> Result<BuiltinProblem> {
    if dim == 0 {
        return Err(Error::Config("problem.dim must be positive".into()));
    }
    match name {
        "quadratic" => quadratic(dim, kappa),
        "linear-simplex" => linear_simplex(dim),
        "linf-center" => linf_center(dim),
        "log-sum-exp" => log_sum_exp(dim),
        "matching-pennies" => game(name, vec![vec![1.0, -1.0], vec![-1.0, 1.0]], 0.0),
        "rps" => game(
            name,
            vec![vec![0.0, -1.0, 1.0], vec![1.0, 0.0, -1.0], vec![-1.0, 1.0, 0.0]],
            0.0,
        ),
        _ => Err(unknown(name)),
    }
}
