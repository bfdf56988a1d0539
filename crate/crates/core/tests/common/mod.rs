//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qcvx::whitebox::SdpInstance;
use rand::Rng;

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// max cᵀz subject to equality rows and inequality rows (a, h) meaning
/// aᵀz ≤ h, by enumerating basic solutions. Assumes a bounded optimum.
pub fn vertex_max(c: &[f64], eq: &[(Vec<f64>, f64)], ineq: &[(Vec<f64>, f64)]) -> Option<f64> {
    let dim = c.len();
    let need = dim - eq.len();
    let mut best: Option<f64> = None;
    for set in combinations(ineq.len(), need) {
        let rows: Vec<&(Vec<f64>, f64)> = eq.iter().chain(set.iter().map(|&i| &ineq[i])).collect();
        let a = DMatrix::from_fn(dim, dim, |i, j| rows[i].0[j]);
        let b = DVector::from_iterator(dim, rows.iter().map(|r| r.1));
        let Some(z) = a.clone().lu().solve(&b) else { continue };
        if (&a * &z - &b).amax() > 1e-9 {
            continue;
        }
        let feasible = ineq
            .iter()
            .all(|(row, h)| row.iter().zip(z.iter()).map(|(p, q)| p * q).sum::<f64>() <= h + 1e-9);
        if feasible {
            let v: f64 = c.iter().zip(z.iter()).map(|(p, q)| p * q).sum();
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    best
}

/// max_{y∈Δᵐ} min_j (Aᵀy)_j, the value of min_{x∈Δⁿ} max_{y∈Δᵐ} yᵀAx.
pub fn game_value(a: &DMatrix<f64>) -> f64 {
    let (m, n) = a.shape();
    let mut c = vec![0.0; m + 1];
    c[m] = 1.0;
    let mut sum = vec![1.0; m + 1];
    sum[m] = 0.0;
    let eq = vec![(sum, 1.0)];
    let mut ineq = Vec::new();
    for i in 0..m {
        let mut r = vec![0.0; m + 1];
        r[i] = -1.0;
        ineq.push((r, 0.0));
    }
    for j in 0..n {
        let mut r: Vec<f64> = (0..m).map(|i| -a[(i, j)]).collect();
        r.push(1.0);
        ineq.push((r, 0.0));
    }
    vertex_max(&c, &eq, &ineq).expect("games have a value")
}

/// max cᵀx s.t. 1ᵀx = r_p, Ax ≤ b, x ≥ 0.
pub fn lp_value(a: &DMatrix<f64>, b: &[f64], c: &[f64], r_p: f64) -> Option<f64> {
    let (m, n) = a.shape();
    let eq = vec![(vec![1.0; n], r_p)];
    let mut ineq: Vec<(Vec<f64>, f64)> = (0..m).map(|i| (a.row(i).iter().copied().collect(), b[i])).collect();
    for j in 0..n {
        let mut r = vec![0.0; n];
        r[j] = -1.0;
        ineq.push((r, 0.0));
    }
    vertex_max(c, &eq, &ineq)
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, max_norm: f64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let s = (&g + g.transpose()) * 0.5;
    let norm = s.clone().symmetric_eigen().eigenvalues.amax();
    let target = max_norm * rng.gen_range(0.3..1.0);
    s * (target / norm)
}

/// A random instance with r_p = 1 that X₀ = I/n satisfies strictly.
pub fn random_sdp<R: Rng>(rng: &mut R, n: usize, m: usize, r_d: f64) -> SdpInstance {
    let a: Vec<DMatrix<f64>> = (0..m).map(|_| random_symmetric(rng, n, 1.0)).collect();
    let c = random_symmetric(rng, n, 1.0);
    let b: Vec<f64> = a
        .iter()
        .map(|ai| (ai.trace() / n as f64 + rng.gen_range(0.05..0.5)).min(1.0))
        .collect();
    SdpInstance::new(a, b, c, 1.0, r_d).expect("valid instance")
}

/// Primal-feasible X: tr X = r_p, X ⪰ 0, tr(AᵢX) ≤ bᵢ, by rejection from
/// mixtures of I/n with random density matrices.
pub fn sample_primal<R: Rng>(rng: &mut R, inst: &SdpInstance, count: usize) -> Vec<DMatrix<f64>> {
    let n = inst.n;
    let mut out = Vec::with_capacity(count);
    let x0 = DMatrix::<f64>::identity(n, n) * (inst.r_p / n as f64);
    while out.len() < count {
        let v = DMatrix::from_fn(n, rng.gen_range(1..=n), |_, _| rng.gen_range(-1.0..1.0));
        let w = &v * v.transpose();
        let w = w.clone() * (inst.r_p / w.trace());
        let t: f64 = rng.gen();
        let x = &x0 * (1.0 - t) + w * t;
        if inst.a.iter().zip(&inst.b).all(|(ai, bi)| (ai * &x).trace() <= *bi) {
            out.push(x);
        }
    }
    out
}
