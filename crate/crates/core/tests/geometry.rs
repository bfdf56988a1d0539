use nalgebra::DMatrix;
use proptest::prelude::*;
use qcvx::geometry::linalg::{from_flat, lambda_max, lambda_min, op_norm, to_flat, trace_norm};
use qcvx::geometry::{spd_exp, spd_log, sym_eig, MirrorGeometry};
use qcvx::{DomainSpec, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// exp(M) by scaling and squaring of a 30-term Taylor series.
fn taylor_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = m / 2f64.powi(squarings);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-scale..scale));
    (&g + g.transpose()) * 0.5
}

/// A random density matrix with eigenvalues at least `floor`/n.
fn random_density(rng: &mut ChaCha8Rng, n: usize, floor: f64) -> DMatrix<f64> {
    let v = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let w = &v * v.transpose() + DMatrix::identity(n, n) * floor;
    let t = w.trace();
    w / t
}

fn random_simplex(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|_| rng.gen_range(0.01..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|v| v / s).collect()
}

#[test]
fn simplex_step_matches_multiplicative_weights() {
    let geom = MirrorGeometry::simplex_entropy(6);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for scale in [1.0, 2.5] {
        let dom = DomainSpec::simplex(6, scale).unwrap();
        for _ in 0..200 {
            let x: Vec<f64> = random_simplex(&mut rng, 6).iter().map(|v| v * scale).collect();
            let g: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let eta = rng.gen_range(0.01..2.0);
            let got = geom.mirror_step(&x, &g, eta, &dom).unwrap();
            let w: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a * (-eta * b).exp()).collect();
            let s: f64 = w.iter().sum();
            for (a, b) in got.iter().zip(&w) {
                assert!((a - scale * b / s).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn spectraplex_step_matches_series_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [2usize, 3, 5] {
        let geom = MirrorGeometry::spectraplex_entropy(n);
        let dom = DomainSpec::Spectraplex { n };
        for _ in 0..20 {
            let x = random_density(&mut rng, n, 0.05);
            let g = random_symmetric(&mut rng, n, 1.0);
            let eta = rng.gen_range(0.05..1.0);
            let got = from_flat(&geom.mirror_step(&to_flat(&x), &to_flat(&g), eta, &dom).unwrap(), n);
            let e = x.clone().symmetric_eigen();
            let log_x = &e.eigenvectors * DMatrix::from_diagonal(&e.eigenvalues.map(f64::ln)) * e.eigenvectors.transpose();
            let w = taylor_exp(&(log_x - g * eta));
            let want = &w / w.trace();
            assert!((&got - &want).amax() < 1e-8, "n = {n}");
            assert!((got.trace() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn commuting_spectraplex_step_reduces_to_simplex() {
    let q = MirrorGeometry::spectraplex_entropy(3);
    let s = MirrorGeometry::simplex_entropy(3);
    let lam = [0.2, 0.3, 0.5];
    let g = [0.4, -1.0, 2.0];
    let diag = |v: &[f64]| to_flat(&DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(v)));
    let mq = q.mirror_step(&diag(&lam), &diag(&g), 0.8, &DomainSpec::Spectraplex { n: 3 }).unwrap();
    let ms = s.mirror_step(&lam, &g, 0.8, &DomainSpec::unit_simplex(3)).unwrap();
    let want = diag(&ms);
    for (a, b) in mq.iter().zip(&want) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn euclidean_projections_satisfy_variational_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let doms = [
        DomainSpec::unit_simplex(5),
        DomainSpec::simplex(5, 3.0).unwrap(),
        DomainSpec::ball(vec![0.5, -0.5, 0.0, 1.0, 0.0], 0.7).unwrap(),
        DomainSpec::boxed(vec![-1.0; 5], vec![0.5; 5]).unwrap(),
    ];
    for dom in &doms {
        for _ in 0..200 {
            let x: Vec<f64> = (0..5).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let p = dom.project(&x).unwrap();
            assert!(dom.contains(&p, 1e-12));
            for _ in 0..20 {
                let raw: Vec<f64> = (0..5).map(|_| rng.gen_range(-4.0..4.0)).collect();
                let w = dom.project(&raw).unwrap();
                let ip: f64 = (0..5).map(|i| (x[i] - p[i]) * (w[i] - p[i])).sum();
                assert!(ip <= 1e-10, "{dom:?}: {ip}");
            }
        }
    }
}

#[test]
fn spectraplex_projection_is_nearest_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dom = DomainSpec::Spectraplex { n: 3 };
    for _ in 0..100 {
        let x = random_symmetric(&mut rng, 3, 2.0);
        let p = from_flat(&dom.project(&to_flat(&x)).unwrap(), 3);
        assert!(dom.contains(&to_flat(&p), 1e-10));
        for _ in 0..20 {
            let w = random_density(&mut rng, 3, 0.0);
            let ip = ((&x - &p).transpose() * (&w - &p)).trace();
            assert!(ip <= 1e-10);
        }
    }
}

#[test]
fn entropy_projection_is_normalization() {
    let geom = MirrorGeometry::simplex_entropy(4);
    let dom = DomainSpec::simplex(4, 2.0).unwrap();
    let p = geom.bregman_project(&[1.0, 2.0, 3.0, 4.0], &dom).unwrap();
    assert_eq!(p, vec![0.2, 0.4, 0.6, 0.8]);
    assert!(matches!(geom.bregman_project(&[1.0, 0.0, 1.0, 1.0], &dom), Err(Error::Domain(_))));
}

#[test]
fn moduli_of_strong_convexity_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let e = MirrorGeometry::euclidean(4);
    let s = MirrorGeometry::simplex_entropy(4);
    let q = MirrorGeometry::spectraplex_entropy(3);
    for _ in 0..2_000 {
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let lhs = e.bregman_divergence(&x, &y).unwrap();
        assert!(lhs >= 0.5 * e.mu * e.primal_norm(&diff).unwrap().powi(2) - 1e-12);

        let x = random_simplex(&mut rng, 4);
        let y = random_simplex(&mut rng, 4);
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let lhs = s.bregman_divergence(&x, &y).unwrap();
        assert!(lhs >= 0.5 * s.mu * s.primal_norm(&diff).unwrap().powi(2) - 1e-12);

        let xm = to_flat(&random_density(&mut rng, 3, 0.01));
        let ym = to_flat(&random_density(&mut rng, 3, 0.01));
        let diff: Vec<f64> = xm.iter().zip(&ym).map(|(a, b)| a - b).collect();
        let lhs = q.bregman_divergence(&xm, &ym).unwrap();
        assert!(lhs >= 0.5 * q.mu * q.primal_norm(&diff).unwrap().powi(2) - 1e-12);
    }
}

#[test]
fn quantum_divergence_of_commuting_states_is_kl() {
    let q = MirrorGeometry::spectraplex_entropy(2);
    let s = MirrorGeometry::simplex_entropy(2);
    let d = q.bregman_divergence(&[0.5, 0.0, 0.0, 0.5], &[0.25, 0.0, 0.0, 0.75]).unwrap();
    let kl = s.bregman_divergence(&[0.5, 0.5], &[0.25, 0.75]).unwrap();
    assert!((d - kl).abs() < 1e-14);
    assert!((kl - 0.14384).abs() < 1e-5);
}

#[test]
fn eigen_examples() {
    let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
    let e = sym_eig(&m).unwrap();
    assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
    let v0 = e.vectors.column(0);
    assert!((v0[0].abs() - 0.5f64.sqrt()).abs() < 1e-14 && (v0[0] - v0[1]).abs() < 1e-14);
    assert_eq!(lambda_max(&m).unwrap(), e.values[0]);
    assert_eq!(lambda_min(&m).unwrap(), e.values[1]);
    let asym = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
    assert!(matches!(sym_eig(&asym), Err(Error::InvalidInput(_))));
    let rect = DMatrix::<f64>::zeros(2, 3);
    assert!(matches!(sym_eig(&rect), Err(Error::InvalidInput(_))));
}

#[test]
fn matrix_log_and_exp_examples() {
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[1.0, std::f64::consts::E, 0.5]));
    let l = spd_log(&d).unwrap();
    assert!((l[(0, 0)]).abs() < 1e-15 && (l[(1, 1)] - 1.0).abs() < 1e-15 && (l[(2, 2)] + 2f64.ln()).abs() < 1e-15);
    let z = spd_exp(&DMatrix::zeros(3, 3)).unwrap();
    assert!((z - DMatrix::<f64>::identity(3, 3)).amax() < 1e-15);
    let singular = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
    assert!(matches!(spd_log(&singular), Err(Error::Domain(_))));
}

#[test]
fn log_exp_round_trip_up_to_condition_1e4() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [2usize, 4, 6] {
        for _ in 0..50 {
            let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
            let mut lam: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-4.0..0.0))).collect();
            lam[0] = 1.0;
            lam[1] = 1e-4;
            let m = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lam.clone())) * q.transpose();
            let m = (&m + m.transpose()) * 0.5;
            let back = spd_exp(&spd_log(&m).unwrap()).unwrap();
            let err = (&back - &m).amax();
            assert!(err <= 1e-8, "n = {n}, err = {err:e}");
            let series = taylor_exp(&spd_log(&m).unwrap());
            assert!((&series - &m).amax() <= 1e-8);
        }
    }
}

#[test]
fn spectral_norms_match_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let m = random_symmetric(&mut rng, 5, 3.0);
        let sv = m.clone().svd(false, false).singular_values;
        assert!((op_norm(&m).unwrap() - sv.max()).abs() < 1e-12);
        assert!((trace_norm(&m).unwrap() - sv.sum()).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn eigendecomposition_reconstructs(entries in prop::collection::vec(-5.0f64..5.0, 16)) {
        let g = DMatrix::from_row_slice(4, 4, &entries);
        let m = (&g + g.transpose()) * 0.5;
        let e = sym_eig(&m).unwrap();
        let back = &e.vectors * DMatrix::from_diagonal(&e.values) * e.vectors.transpose();
        prop_assert!((back - &m).amax() < 1e-10);
        prop_assert!((e.vectors.transpose() * &e.vectors - DMatrix::<f64>::identity(4, 4)).amax() < 1e-12);
        for i in 1..4 {
            prop_assert!(e.values[i - 1] >= e.values[i]);
        }
    }

    #[test]
    fn three_point_identity_simplex(
        a in prop::collection::vec(0.01f64..1.0, 5),
        b in prop::collection::vec(0.01f64..1.0, 5),
        c in prop::collection::vec(0.0f64..1.0, 5),
    ) {
        let s = MirrorGeometry::simplex_entropy(5);
        let r = s.three_point_identity_residual(&a, &b, &c).unwrap();
        prop_assert!(r.abs() < 1e-12);
    }

    #[test]
    fn three_point_identity_euclidean(
        a in prop::collection::vec(-5.0f64..5.0, 3),
        b in prop::collection::vec(-5.0f64..5.0, 3),
        c in prop::collection::vec(-5.0f64..5.0, 3),
    ) {
        let e = MirrorGeometry::euclidean(3);
        prop_assert!(e.three_point_identity_residual(&a, &b, &c).unwrap().abs() < 1e-10);
    }

    #[test]
    fn mirror_steps_stay_feasible(
        x in prop::collection::vec(0.01f64..1.0, 4),
        g in prop::collection::vec(-50.0f64..50.0, 4),
        eta in 1e-3f64..10.0,
    ) {
        let s: f64 = x.iter().sum();
        let x: Vec<f64> = x.iter().map(|v| v / s).collect();
        let dom = DomainSpec::unit_simplex(4);
        let y = MirrorGeometry::simplex_entropy(4).mirror_step(&x, &g, eta, &dom).unwrap();
        prop_assert!(dom.contains(&y, 1e-12));
        prop_assert!(y.iter().all(|v| *v > 0.0));
        let ball = DomainSpec::ball(vec![0.0; 4], 1.0).unwrap();
        let z = MirrorGeometry::euclidean(4).mirror_step(&x, &g, eta, &ball).unwrap();
        prop_assert!(ball.contains(&z, 1e-12));
    }
}
