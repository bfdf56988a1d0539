//! Dense symmetric eigendecomposition and spectral functions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Eigendecomposition M = V·diag(λ)·Vᵀ with λ sorted in descending order.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn from_flat(x: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, x)
}

pub fn to_flat(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut v = Vec::with_capacity(n * m.ncols());
    for i in 0..n {
        for j in 0..m.ncols() {
            v.push(m[(i, j)]);
        }
    }
    v
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn sym_eig(m: &DMatrix<f64>) -> Result<SymEig> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let scale = m.amax().max(1.0);
    let asym = (m - m.transpose()).amax();
    if asym > 1e-10 * scale {
        return Err(Error::InvalidInput(format!("matrix not symmetric (max |M - Mt| = {asym:e})")));
    }
    let n = m.nrows();
    let eig = symmetrize(m).try_symmetric_eigen(f64::EPSILON, 10_000).ok_or_else(|| {
        Error::Numeric(format!("symmetric eigensolver did not converge (n = {n}, max |M| = {scale:e})"))
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok(SymEig { values, vectors })
}

/// V·diag(λ)·Vᵀ.
pub fn reconstruct(v: &DMatrix<f64>, lam: &[f64]) -> DMatrix<f64> {
    let mut scaled = v.clone();
    for (j, l) in lam.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*l);
    }
    symmetrize(&(scaled * v.transpose()))
}

/// Applies a scalar function to the spectrum.
pub fn spectral_map(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let e = sym_eig(m)?;
    let lam: Vec<f64> = e.values.iter().map(|v| f(*v)).collect();
    Ok(reconstruct(&e.vectors, &lam))
}

pub fn spd_log(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let e = sym_eig(m)?;
    if let Some(min) = e.values.iter().copied().reduce(f64::min) {
        if min <= 0.0 {
            return Err(Error::Domain(format!("matrix log needs positive eigenvalues, found {min:e}")));
        }
    }
    let lam: Vec<f64> = e.values.iter().map(|v| v.ln()).collect();
    Ok(reconstruct(&e.vectors, &lam))
}

pub fn spd_exp(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    spectral_map(m, f64::exp)
}

pub fn lambda_max(m: &DMatrix<f64>) -> Result<f64> {
    Ok(sym_eig(m)?.values[0])
}

pub fn lambda_min(m: &DMatrix<f64>) -> Result<f64> {
    let e = sym_eig(m)?;
    Ok(e.values[e.values.len() - 1])
}

/// Spectral norm of a symmetric matrix.
pub fn op_norm(m: &DMatrix<f64>) -> Result<f64> {
    let e = sym_eig(m)?;
    Ok(e.values.iter().fold(0.0_f64, |a, v| a.max(v.abs())))
}

/// Sum of absolute eigenvalues of a symmetric matrix.
pub fn trace_norm(m: &DMatrix<f64>) -> Result<f64> {
    Ok(sym_eig(m)?.values.iter().map(|v| v.abs()).sum())
}
