//! Cost-formula regimes for zero-sum games.

use std::fmt::Write as _;

/// Costs at one (m, 1/ε) grid point with n = m.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeRow {
    pub m: f64,
    pub inv_eps: f64,
    /// m√n/ε², this crate's route.
    pub mirror_descent: f64,
    /// (m + n)/ε², classical sublinear.
    pub classical: f64,
    /// √(m + n)/ε^2.5 + 1/ε³, prior quantum.
    pub prior_quantum: f64,
    pub label: &'static str,
}

pub const LABELS: [&str; 3] = ["mirror-descent", "classical", "prior-quantum"];

pub fn regime_row(m: f64, inv_eps: f64) -> RegimeRow {
    let n = m;
    let costs = [
        m * n.sqrt() * inv_eps.powi(2),
        (m + n) * inv_eps.powi(2),
        (m + n).sqrt() * inv_eps.powf(2.5) + inv_eps.powi(3),
    ];
    let mut best = 0;
    for i in 1..3 {
        if costs[i] < costs[best] {
            best = i;
        }
    }
    RegimeRow {
        m,
        inv_eps,
        mirror_descent: costs[0],
        classical: costs[1],
        prior_quantum: costs[2],
        label: LABELS[best],
    }
}

pub fn zsg_regimes(m_range: &[f64], inv_eps_range: &[f64]) -> Vec<RegimeRow> {
    let mut rows = Vec::with_capacity(m_range.len() * inv_eps_range.len());
    for &m in m_range {
        for &e in inv_eps_range {
            rows.push(regime_row(m, e));
        }
    }
    rows
}

/// TSV with a header line; ties go to the earlier column.
pub fn emit_zsg_regimes(m_range: &[f64], inv_eps_range: &[f64]) -> String {
    let mut out = String::from("m\tinv_eps\tmirror_descent\tclassical\tprior_quantum\tlabel\n");
    for r in zsg_regimes(m_range, inv_eps_range) {
        let _ = writeln!(
            out,
            "{}\t{}\t{:e}\t{:e}\t{:e}\t{}",
            r.m, r.inv_eps, r.mirror_descent, r.classical, r.prior_quantum, r.label
        );
    }
    out
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
