use proptest::prelude::*;
use strainlab::geodesy::ode_solution;
use strainlab::random::{random_gl_plus, random_rotation, random_skew, random_spd, seeded};
use strainlab::{
    mat_exp, polar, spd_log, strain, svd_special, sym_eigen, DiscretePath, GeodesicSpec,
    IsotropicMetric, Matrix, MetricKind, StrainKind,
};

fn metric_strategy() -> impl Strategy<Value = IsotropicMetric> {
    (0.0..3.0f64, 0.1..3.0f64, -3.0..-0.05f64)
        .prop_map(|(a, b, g)| IsotropicMetric::new(a, b, g).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exp_log_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let p = random_spd(n, 1e3, &mut seeded(seed));
        let back = mat_exp(&spd_log(&p).unwrap());
        prop_assert!((&back - &p).frobenius_norm() <= 1e-10 * p.frobenius_norm());
    }

    #[test]
    fn svd_and_polar_reconstruct(seed in any::<u64>(), n in 1usize..=5) {
        let a = random_gl_plus(n, 1e3, &mut seeded(seed));
        let svd = svd_special(&a).unwrap();
        prop_assert!((&svd.reconstruct() - &a).frobenius_norm() <= 1e-10 * a.frobenius_norm());
        prop_assert!((svd.u.det() - 1.0).abs() < 1e-10 && (svd.v.det() - 1.0).abs() < 1e-10);
        prop_assert!(svd.sigma.windows(2).all(|w| w[0] >= w[1]));

        let pd = polar(&a).unwrap();
        prop_assert!((&pd.rotation.matmul(&pd.stretch) - &a).frobenius_norm() <= 1e-10 * a.frobenius_norm());
        prop_assert!(pd.rotation.orthogonality_defect() < 1e-10);
        prop_assert!(pd.stretch.asymmetry() == 0.0);
        // P² = AᵀA
        let ata = a.transpose().matmul(&a);
        prop_assert!((&pd.stretch.matmul(&pd.stretch) - &ata).frobenius_norm() <= 1e-9 * ata.frobenius_norm());
    }

    #[test]
    fn exp_of_commuting_sum_factors(seed in any::<u64>(), n in 2usize..=4, c in -1.0..1.0f64) {
        // X and p(X) commute for any polynomial p
        let x = random_skew(n, &mut seeded(seed)).add_scaled(0.3, &Matrix::identity(n));
        let y = x.matmul(&x).scale(0.1 * c).add_scaled(c, &x);
        let lhs = mat_exp(&(&x + &y));
        let rhs = mat_exp(&x).matmul(&mat_exp(&y));
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-9 * lhs.frobenius_norm());
    }

    #[test]
    fn strains_are_bi_rotation_invariant(seed in any::<u64>(), n in 2usize..=4, m in metric_strategy()) {
        let mut rng = seeded(seed);
        let a = random_gl_plus(n, 100.0, &mut rng);
        let u = random_rotation(n, &mut rng);
        let v = random_rotation(n, &mut rng);
        let moved = u.matmul(&a).matmul(&v.transpose());
        for kind in StrainKind::ALL {
            let r0 = strain(kind, Some(&m), &a).unwrap();
            let r1 = strain(kind, Some(&m), &moved).unwrap();
            prop_assert!(rel(r1.value, r0.value) <= 1e-9, "{kind}");
            let expected = u.matmul(&r0.minimizer).matmul(&v.transpose());
            prop_assert!((&r1.minimizer - &expected).max_abs() <= 1e-9, "{kind}");
        }
    }

    #[test]
    fn inverse_invariant_kinds(seed in any::<u64>(), n in 2usize..=4, m in metric_strategy()) {
        let a = random_gl_plus(n, 100.0, &mut seeded(seed));
        let a_inv = a.inverse().unwrap();
        for kind in StrainKind::ALL.into_iter().filter(|k| k.is_inverse_invariant()) {
            let r0 = strain(kind, Some(&m), &a).unwrap();
            let r1 = strain(kind, Some(&m), &a_inv).unwrap();
            prop_assert!(rel(r1.value, r0.value) <= 1e-9, "{kind}");
            prop_assert!((&r1.minimizer - &r0.minimizer.transpose()).max_abs() <= 1e-9, "{kind}");
        }
    }

    #[test]
    fn strain_vanishes_exactly_on_rotations(seed in any::<u64>(), n in 2usize..=4, m in metric_strategy()) {
        let q = random_rotation(n, &mut seeded(seed));
        for kind in StrainKind::ALL {
            let r = strain(kind, Some(&m), &q).unwrap();
            prop_assert!(r.value <= 1e-12, "{kind}: {}", r.value);
        }
        let a = q.matmul(&Matrix::from_diag(&vec![1.0 + 1e-3; n]));
        for kind in StrainKind::ALL {
            prop_assert!(strain(kind, Some(&m), &a).unwrap().value > 1e-6, "{kind}");
        }
    }

    #[test]
    fn metric_left_and_right_orthogonal_invariance(seed in any::<u64>(), n in 2usize..=4, m in metric_strategy()) {
        let mut rng = seeded(seed);
        let b = random_gl_plus(n, 10.0, &mut rng);
        let c = random_gl_plus(n, 10.0, &mut rng);
        let x = random_gl_plus(n, 10.0, &mut rng);
        let y = random_skew(n, &mut rng);
        let kind = MetricKind::LeftInvariant(m);
        let base = kind.inner_at(&b, &x, &y).unwrap();
        let left = kind.inner_at(&c.matmul(&b), &c.matmul(&x), &c.matmul(&y)).unwrap();
        let scale = kind.norm_sq_at(&b, &x).unwrap().sqrt() * kind.norm_sq_at(&b, &y).unwrap().sqrt();
        prop_assert!((left - base).abs() <= 1e-9 * scale);
        let u = random_rotation(n, &mut rng);
        let right = kind.inner_at(&b.matmul(&u), &x.matmul(&u), &y.matmul(&u)).unwrap();
        prop_assert!((right - base).abs() <= 1e-9 * scale);
    }

    #[test]
    fn geodesics_commute_with_left_translation(seed in any::<u64>(), n in 2usize..=3, m in metric_strategy(), t in 0.0..1.5f64) {
        let mut rng = seeded(seed);
        let a = random_gl_plus(n, 10.0, &mut rng);
        let c = random_gl_plus(n, 10.0, &mut rng);
        let x0 = random_gl_plus(n, 10.0, &mut rng).scale(0.3);
        let g = GeodesicSpec::new(a.clone(), x0.clone(), m).unwrap();
        let h = GeodesicSpec::new(c.matmul(&a), x0, m).unwrap();
        let lhs = h.eval(t);
        let rhs = c.matmul(&g.eval(t));
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-12 * lhs.frobenius_norm());
    }

    #[test]
    fn geodesics_have_constant_speed(seed in any::<u64>(), n in 2usize..=3, m in metric_strategy()) {
        let x0 = random_gl_plus(n, 10.0, &mut seeded(seed)).scale(0.4);
        let speed0 = m.norm(&x0);
        for t in [0.3, 0.7, 1.2] {
            let speed = m.norm(&ode_solution(&m, &x0, t));
            prop_assert!(rel(speed, speed0) <= 1e-10);
        }
    }

    #[test]
    fn commutator_identity(seed in any::<u64>(), n in 2usize..=4, m in metric_strategy()) {
        let mut rng = seeded(seed);
        let x = random_gl_plus(n, 10.0, &mut rng);
        let y = random_gl_plus(n, 10.0, &mut rng);
        let lhs = m.inner(&x, &y.commutator(&x)).unwrap();
        let rhs = m.kappa() * m.inner(&x.commutator(&x.transpose()), &y).unwrap();
        let scale = m.norm(&x).powi(2) * m.norm(&y) + lhs.abs();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
    }
}

#[test]
fn eigen_matches_nalgebra() {
    let mut rng = seeded(11);
    for n in 1..=6 {
        for _ in 0..20 {
            let s = random_spd(n, 1e4, &mut rng).add_scaled(-1.0, &Matrix::identity(n));
            let ours = sym_eigen(&s).unwrap();
            let theirs = nalgebra::DMatrix::from_row_slice(n, n, s.as_slice()).symmetric_eigen();
            let mut expected: Vec<f64> = theirs.eigenvalues.iter().copied().collect();
            expected.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in ours.values.iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-10 * s.frobenius_norm().max(1.0), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn singular_values_match_nalgebra() {
    let mut rng = seeded(12);
    for n in 1..=6 {
        for _ in 0..20 {
            let a = random_gl_plus(n, 1e3, &mut rng);
            let ours = svd_special(&a).unwrap();
            let theirs = nalgebra::DMatrix::from_row_slice(n, n, a.as_slice()).svd(false, false);
            let mut expected: Vec<f64> = theirs.singular_values.iter().copied().collect();
            expected.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in ours.sigma.iter().zip(&expected) {
                assert!(rel(*a, *b) <= 1e-10, "{a} vs {b}");
            }
        }
    }
}

/// The chord-midpoint length of a sampled geodesic converges to the true
/// length with error O(K⁻²): |error| shrinks monotonically and by about 4×
/// per doubling of K.
#[test]
fn path_length_converges_quadratically() {
    let m = IsotropicMetric::new(0.5, 1.0, -1.0).unwrap();
    let a = Matrix::from_diag(&[3.0, 0.4, 1.5]);
    let log_a = spd_log(&a).unwrap();
    let exact = m.norm(&log_a);
    let g = GeodesicSpec::new(a, -&log_a, m).unwrap();
    let errors: Vec<f64> = [8, 16, 32, 64, 128]
        .iter()
        .map(|&k| {
            let path = DiscretePath::new(g.sample(1.0, k), MetricKind::LeftInvariant(m)).unwrap();
            (path.length().unwrap() - exact).abs()
        })
        .collect();
    for w in errors.windows(2) {
        assert!(w[1] < w[0], "{errors:?}");
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "{errors:?}");
    }
}
