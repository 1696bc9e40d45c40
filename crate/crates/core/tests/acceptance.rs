//! Acceptance suite: one line per criterion, then a summary.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails on any criterion failure except those listed in
//! `KNOWN_UNATTAINABLE`, and only while their observed outcome still matches
//! the recorded analysis. Set `ACCEPTANCE_STRICT=1` to fail on those too.

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use strainlab::geodesy::{geodesic_ode_rhs, ode_solution};
use strainlab::metric::isotropy_defect;
use strainlab::oracle::{
    biinvariance_counterexample, halving_diagonal, intrinsic_distance_from, intrinsic_distance_to_son, min_over_rotations,
    relax_path, unit_bidiagonal, PathOptimizerConfig, RotationObjective, RotationSampler,
    SamplingScheme,
};
use strainlab::random::{
    gaussian_matrix, random_gl_plus, random_orthogonal, random_rotation, random_skew,
    random_symmetric, seeded,
};
use strainlab::{
    euclidean_strain_ext, geodesic_strain, mat_exp, strain, symmetrized_geodesic_distance_strain,
    DiscretePath, GeodesicSpec, IsotropicMetric, Matrix, MetricKind, StrainKind,
};

/// Criteria that cannot hold as stated; see the README.
const KNOWN_UNATTAINABLE: &[u32] = &[9];

struct Outcome {
    pass: bool,
    detail: String,
    /// For a known-unattainable criterion: whether the failure matches the
    /// recorded analysis.
    as_analyzed: bool,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome {
            pass,
            detail,
            as_analyzed: false,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn metric(a: f64, b: f64, g: f64) -> IsotropicMetric {
    IsotropicMetric::new(a, b, g).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(1);
    let metrics = [metric(0.0, 1.0, -1.0), metric(1.0, 2.0, -1.0)];
    let cfg = PathOptimizerConfig::default();
    let mut worst: f64 = 0.0;
    let mut all_converged = true;
    for _ in 0..20 {
        let a = random_gl_plus(2, 100.0, &mut rng);
        for m in &metrics {
            let closed = geodesic_strain(m, &a).unwrap().value;
            let r = intrinsic_distance_to_son(&a, MetricKind::LeftInvariant(*m), &cfg).unwrap();
            all_converged &= r.converged;
            worst = worst.max(rel(r.value, closed));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        worst < 0.01 && secs < 120.0,
        format!(
            "geodesic oracle vs closed form, 40 runs: worst rel err {worst:.2e} (< 1e-2), {secs:.1} s (< 120 s), all converged: {all_converged}"
        ),
    )
}

fn angle_of(q: &Matrix) -> f64 {
    q[(1, 0)].atan2(q[(0, 0)])
}

fn wrapped(d: f64) -> f64 {
    let d = d.rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn criterion_2() -> Outcome {
    let mut rng = seeded(2);
    let grid = RotationSampler::new(2, 0, SamplingScheme::GridAngle { step: 1e-4 }).unwrap();
    let (mut worst_value, mut worst_angle): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let a = random_gl_plus(2, 100.0, &mut rng);
        let closed = euclidean_strain_ext(&a).unwrap();
        let search = min_over_rotations(&a, RotationObjective::FrobeniusDistance, &grid).unwrap();
        worst_value = worst_value.max((search.value - closed.value).abs());
        worst_angle = worst_angle.max(wrapped(angle_of(&search.argmin) - angle_of(&closed.minimizer)));
    }

    let mut worst_beat: f64 = 0.0;
    for i in 0..5 {
        let a = random_gl_plus(3, 100.0, &mut rng);
        let closed = euclidean_strain_ext(&a).unwrap().value;
        let sampler =
            RotationSampler::new(3, 100 + i, SamplingScheme::UniformRandom { samples: 100_000 }).unwrap();
        let search = min_over_rotations(&a, RotationObjective::FrobeniusDistance, &sampler).unwrap();
        worst_beat = worst_beat.max(closed - search.value);
    }
    Outcome::new(
        worst_value <= 1e-5 && worst_angle <= 1e-3 && worst_beat <= 1e-9,
        format!(
            "polar factor optimal: n=2 grid value gap {worst_value:.1e} (<= 1e-5), angle gap {worst_angle:.1e} (<= 1e-3); n=3 largest improvement over polar {worst_beat:.1e} (<= 1e-9)"
        ),
    )
}

fn random_metric<R: Rng>(rng: &mut R) -> IsotropicMetric {
    metric(
        rng.random_range(0.0..2.0),
        rng.random_range(0.5..2.0),
        rng.random_range(-2.0..-0.1),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = seeded(3);
    let mut worst_rk4: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for n in [2, 3] {
        for _ in 0..20 {
            let m = random_metric(&mut rng);
            let x0 = gaussian_matrix(n, &mut rng).scale(0.5);
            let a = random_gl_plus(n, 10.0, &mut rng);
            let g = GeodesicSpec::new(a, x0.clone(), m).unwrap();
            let closed = g.eval(1.0);
            let rk4 = g.integrate(1.0, 2000).unwrap();
            worst_rk4 = worst_rk4.max((&closed - &rk4).frobenius_norm() / closed.frobenius_norm().max(1.0));

            let h = 1e-5;
            for t in [0.1, 0.5, 0.9] {
                let fd = (&ode_solution(&m, &x0, t + h) - &ode_solution(&m, &x0, t - h)).scale(0.5 / h);
                let res = (&fd - &geodesic_ode_rhs(&m, &ode_solution(&m, &x0, t))).frobenius_norm();
                worst_fd = worst_fd.max(res);
            }
        }
    }
    Outcome::new(
        worst_rk4 <= 1e-7 && worst_fd <= 1e-6,
        format!("closed-form geodesic vs RK4 (2000 steps), 40 pairs: {worst_rk4:.1e} (<= 1e-7); ODE residual {worst_fd:.1e} (<= 1e-6)"),
    )
}

fn criterion_4() -> Outcome {
    let m = metric(0.0, 1.0, -1.0);
    let a = Matrix::from_diag(&[2.0, 0.5]);
    let target = SQRT_2 * LN_2;
    let direct = geodesic_strain(&m, &a).unwrap().value;
    let velocity = Matrix::from_diag(&[-LN_2, LN_2]);
    let nodes = GeodesicSpec::new(a, velocity, m).unwrap().sample(1.0, 256);
    let end_err = (nodes.last().unwrap() - &Matrix::identity(2)).max_abs();
    let path = DiscretePath::new(nodes, MetricKind::LeftInvariant(m)).unwrap();
    let sampled = path.length().unwrap();
    Outcome::new(
        (direct - target).abs() <= 1e-9 && (sampled - target).abs() <= 1e-4 && end_err < 1e-12,
        format!(
            "diag(2,1/2): direct {direct:.12} vs {target:.12} (err {:.1e}); sampled geodesic K=256 {sampled:.8} (err {:.1e})",
            (direct - target).abs(),
            (sampled - target).abs()
        ),
    )
}

fn criterion_5() -> Outcome {
    let cases = [
        Matrix::from_diag(&[2.0, 0.5]),
        Matrix::from_diag(&[3.0, 1.0]),
        Matrix::from_diag(&[5.0, 2.0, 0.5]),
    ];
    let cfg = PathOptimizerConfig::default();
    let mut rng = seeded(5);
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for s in &cases {
        let n = s.n();
        let target = (s - &Matrix::identity(n)).frobenius_norm();
        let r = intrinsic_distance_to_son(s, MetricKind::EuclideanFrobenius, &cfg).unwrap();
        // same search with the free endpoint started away from the answer
        let tilt = mat_exp(&random_skew(n, &mut rng).scale(0.4));
        let r_tilted = intrinsic_distance_from(s, &tilt, MetricKind::EuclideanFrobenius, &cfg).unwrap();
        worst = worst.max(rel(r.value, target)).max(rel(r_tilted.value, target));
        parts.push(format!("{:.5}|{:.5}/{:.5}", r.value, r_tilted.value, target));
    }
    Outcome::new(
        worst <= 0.005,
        format!(
            "intrinsic Euclidean oracle (polar start | tilted start) vs ||S - I||: {} (worst rel {worst:.1e}, <= 5e-3)",
            parts.join(", ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = seeded(6);
    let m = metric(0.0, 1.0, -1.0);
    let mut exact = true;
    for _ in 0..100 {
        let a = random_gl_plus(3, 100.0, &mut rng);
        let g = geodesic_strain(&m, &a).unwrap().value;
        let s = symmetrized_geodesic_distance_strain(&m, &a).unwrap().value;
        exact &= s / g == 2.0;
    }
    let cfg = PathOptimizerConfig::default();
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let a = random_gl_plus(2, 20.0, &mut rng);
        let target = SQRT_2 * geodesic_strain(&m, &a).unwrap().value;
        let r = intrinsic_distance_to_son(&a, MetricKind::SymmetrizedLeftInvariant(m), &cfg).unwrap();
        worst = worst.max(rel(r.value, target));
    }
    Outcome::new(
        exact && worst <= 0.02,
        format!("distance symmetrization ratio exactly 2: {exact}; symmetrized-metric oracle vs sqrt2 * geodesic, 5 runs: worst rel {worst:.1e} (<= 2e-2)"),
    )
}

fn criterion_7() -> Outcome {
    const TRIALS: usize = 500;
    let mut rng = seeded(7);
    let mut failures = Vec::new();

    let mut bi = 0;
    let mut inv = 0;
    for t in 0..TRIALS {
        let n = 2 + t % 3;
        let m = random_metric(&mut rng);
        let a = random_gl_plus(n, 100.0, &mut rng);
        let u = random_rotation(n, &mut rng);
        let v = random_rotation(n, &mut rng);
        let moved = u.matmul(&a).matmul(&v.transpose());
        let a_inv = a.inverse().unwrap();
        let ok_bi = StrainKind::ALL.iter().all(|&k| {
            let r0 = strain(k, Some(&m), &a).unwrap();
            let r1 = strain(k, Some(&m), &moved).unwrap();
            let expected_min = u.matmul(&r0.minimizer).matmul(&v.transpose());
            rel(r1.value, r0.value) <= 1e-9 && (&r1.minimizer - &expected_min).max_abs() <= 1e-9
        });
        let ok_inv = StrainKind::ALL
            .iter()
            .filter(|k| k.is_inverse_invariant())
            .all(|&k| {
                let v0 = strain(k, Some(&m), &a).unwrap().value;
                let v1 = strain(k, Some(&m), &a_inv).unwrap().value;
                rel(v1, v0) <= 1e-9
            });
        bi += ok_bi as usize;
        inv += ok_inv as usize;
    }

    let mut orth = 0;
    let mut comm = 0;
    let mut iso = 0;
    for t in 0..TRIALS {
        let n = 2 + t % 3;
        let m = random_metric(&mut rng);
        let s = random_symmetric(n, &mut rng);
        let w = random_skew(n, &mut rng);
        let ip = m.inner(&s, &w).unwrap();
        orth += (ip.abs() <= 1e-14 * s.frobenius_norm() * w.frobenius_norm()) as usize;

        let x = gaussian_matrix(n, &mut rng);
        let y = gaussian_matrix(n, &mut rng);
        let lhs = m.inner(&x, &y.commutator(&x)).unwrap();
        let rhs = m.kappa() * m.inner(&x.commutator(&x.transpose()), &y).unwrap();
        let scale = (lhs.abs().max(rhs.abs())).max(
            (n as f64 * m.alpha() + m.beta() - m.gamma()) * x.frobenius_norm().powi(2) * y.frobenius_norm(),
        );
        comm += ((lhs - rhs).abs() <= 1e-10 * scale) as usize;

        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        let u = random_orthogonal(n, sign, &mut rng);
        let form = |p: &Matrix, q: &Matrix| m.inner(p, q).unwrap();
        iso += (isotropy_defect(form, &x, &y, &u) <= 1e-10) as usize;
    }

    for (name, count) in [
        ("bi-SO(n)", bi),
        ("inverse", inv),
        ("orthogonality", orth),
        ("commutator", comm),
        ("isotropy", iso),
    ] {
        if count != TRIALS {
            failures.push(format!("{name} {count}/{TRIALS}"));
        }
    }
    Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            format!("bi-SO(n), inverse, orthogonality, commutator, isotropy (det ±1): {TRIALS}/{TRIALS} each")
        } else {
            format!("failing checks: {}", failures.join(", "))
        },
    )
}

fn criterion_8() -> Outcome {
    let n = 2;
    let a = unit_bidiagonal(n);
    let d = halving_diagonal(n);
    let d_inv = d.inverse().unwrap();
    let mut dk = Matrix::identity(n);
    let mut dk_inv = Matrix::identity(n);
    let mut ok = true;
    let mut prev = f64::INFINITY;
    for k in 0..=20u32 {
        let c = biinvariance_counterexample(n, k).unwrap();
        let explicit = dk_inv.matmul(&a).matmul(&dk);
        let dist = (&c.matrix - &Matrix::identity(n)).frobenius_norm();
        ok &= explicit == c.matrix;
        ok &= c.frobenius_to_identity == 2f64.powi(-(k as i32)) && dist == c.frobenius_to_identity;
        ok &= dist < prev;
        prev = dist;
        dk = dk.matmul(&d);
        dk_inv = dk_inv.matmul(&d_inv);
    }
    let d_a_i = (&a - &Matrix::identity(n)).frobenius_norm();
    ok &= d_a_i == 1.0;
    Outcome::new(
        ok,
        format!("conjugates D^-k A D^k at distance exactly 2^-k for k = 0..20, strictly decreasing, d(A,I) = {d_a_i}"),
    )
}

/// A path from I to `b` that bends around the origin through a small
/// rotational component, so every node stays in GL(2)⁺.
fn around_origin(b: &Matrix, bend: f64, segments: usize) -> DiscretePath {
    let i = Matrix::identity(2);
    let j = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
    let nodes = (0..=segments)
        .map(|s| {
            let t = s as f64 / segments as f64;
            let base = if t <= 0.5 { i.scale(1.0 - 2.0 * t) } else { b.scale(2.0 * t - 1.0) };
            base.add_scaled(bend * (PI * t).sin(), &j)
        })
        .collect();
    DiscretePath::new(nodes, MetricKind::EuclideanFrobenius).unwrap()
}

fn criterion_9() -> Outcome {
    let e3 = euclidean_strain_ext(&Matrix::from_diag(&[3.0, 1.0])).unwrap().value;
    let e13 = euclidean_strain_ext(&Matrix::from_diag(&[1.0 / 3.0, 1.0])).unwrap().value;
    let part_a = e3 != e13;

    // I to −I, started from the half-turn arc, both endpoints fixed
    let cfg = PathOptimizerConfig {
        endpoint_free: false,
        ..PathOptimizerConfig::default()
    };
    let i = Matrix::identity(2);
    let neg = Matrix::from_diag(&[-1.0, -1.0]);
    let extrinsic = (&i - &neg).frobenius_norm();
    let arc = GeodesicSpec::new(
        i.clone(),
        Matrix::from_rows(&[[0.0, -PI], [PI, 0.0]]).unwrap(),
        metric(0.0, 1.0, -1.0),
    )
    .unwrap()
    .sample(1.0, 32);
    let arc = DiscretePath::new(arc, MetricKind::EuclideanFrobenius).unwrap();
    let arc_len = arc.length().unwrap();
    let relaxed = relax_path(arc, &cfg).unwrap();
    let part_b = relaxed.value > extrinsic + 0.1;

    // a pair whose segment does cross det < 0
    let b = Matrix::from_diag(&[-1.0, -2.0]);
    let ext_b = (&i - &b).frobenius_norm();
    let len_b = [0.3, 0.05]
        .iter()
        .map(|&bend| relax_path(around_origin(&b, bend, 32), &cfg).unwrap().value)
        .fold(f64::INFINITY, f64::min);

    let mut out = Outcome::new(
        part_a && part_b,
        format!(
            "euclidean(diag(3,1)) = {e3} != euclidean(diag(1/3,1)) = {e13:.6}: {part_a}; \
             I -> -I optimizer length {:.9} from arc {arc_len:.4} vs required > {:.4}: {part_b}; \
             supplementary I -> diag(-1,-2): {len_b:.5} > {ext_b:.5}",
            relaxed.value,
            extrinsic + 0.1
        ),
    );
    // recorded analysis: the segment I -> -I never enters det < 0, so the
    // intrinsic distance equals the extrinsic one and the optimizer must
    // approach 2√2 from above; the crossing pair must show a strict gap
    out.as_analyzed = part_a
        && relaxed.converged
        && (relaxed.value - extrinsic).abs() < 1e-6
        && len_b > ext_b + 0.01;
    out
}

fn main() -> ExitCode {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut passed = 0;
    let mut fatal = false;
    for (id, run) in criteria {
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {id}: {}", out.detail);
        if out.pass {
            passed += 1;
        } else if KNOWN_UNATTAINABLE.contains(&id) && out.as_analyzed && !strict {
            println!("       criterion {id} fails as analyzed (not attainable as stated; see README)");
        } else {
            fatal = true;
        }
    }
    println!("acceptance: {passed}/9 criteria pass");
    if fatal {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
