//! Built-in property suites, reported as a table and a JSON summary.

use std::time::Instant;

use clap::{Args, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use strainlab::geodesy::{geodesic_ode_rhs, ode_solution};
use strainlab::metric::{check_isotropy_of, isotropy_defect};
use strainlab::oracle::{
    biinvariance_counterexample, intrinsic_distance_to_son, min_over_rotations,
    segment_exit_point, PathOptimizerConfig, RotationObjective, RotationSampler, SamplingScheme,
};
use strainlab::random::{
    gaussian_matrix, random_gl_plus, random_orthogonal, random_rotation, random_skew,
    random_symmetric, seeded, SeededRng,
};
use strainlab::{
    euclidean_strain_ext, euclidean_strain_int, geodesic_strain, spd_log, strain,
    symmetrized_euclidean_strain, DiscretePath, GeodesicSpec, IsotropicMetric, Matrix,
    MetricKind, StrainKind,
};

use crate::{CliError, DEFAULT_SEED, EXIT_CHECK_FAILED, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Metric,
    Geodesy,
    Strain,
    Oracle,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Seed for all random trials; defaults to $STRAINLAB_SEED, then a fixed value.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fewer trials and smaller oracle runs.
    #[arg(long)]
    pub quick: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize)]
struct Summary<'a> {
    suite: Suite,
    seed: u64,
    quick: bool,
    passed: usize,
    failed: usize,
    seconds: f64,
    checks: &'a [CheckResult],
}

/// Trial counts for one run.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub trials: usize,
    pub oracle_runs: usize,
    pub samples: usize,
}

impl Budget {
    pub fn new(quick: bool) -> Self {
        if quick {
            Budget {
                trials: 100,
                oracle_runs: 3,
                samples: 10_000,
            }
        } else {
            Budget {
                trials: 500,
                oracle_runs: 10,
                samples: 100_000,
            }
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("STRAINLAB_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("STRAINLAB_SEED is not an integer: '{v}'"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub fn run(args: &VerifyArgs) -> Result<u8, CliError> {
    let seed = resolve_seed(args.seed)?;
    let budget = Budget::new(args.quick);
    let start = Instant::now();
    let results = run_suite(args.suite, seed, budget);
    let seconds = start.elapsed().as_secs_f64();

    let passed = results.iter().filter(|c| c.pass).count();
    let failed = results.len() - passed;
    let width = results.iter().map(|c| c.suite.len() + c.name.len() + 1).max().unwrap_or(0);
    for c in &results {
        let label = format!("{}/{}", c.suite, c.name);
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!("{tag}  {label:<width$}  {}", c.detail);
    }
    println!("{passed} passed, {failed} failed in {seconds:.1} s (seed {seed})");
    let summary = Summary {
        suite: args.suite,
        seed,
        quick: args.quick,
        passed,
        failed,
        seconds,
        checks: &results,
    };
    println!(
        "{}",
        serde_json::to_string(&summary).map_err(|e| CliError::Output(e.to_string()))?
    );
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn run_suite(suite: Suite, seed: u64, budget: Budget) -> Vec<CheckResult> {
    let suites: Vec<(&'static str, SuiteFn)> = match suite {
        Suite::All => vec![
            ("metric", metric_checks),
            ("geodesy", geodesy_checks),
            ("strain", strain_checks),
            ("oracle", oracle_checks),
        ],
        Suite::Metric => vec![("metric", metric_checks)],
        Suite::Geodesy => vec![("geodesy", geodesy_checks)],
        Suite::Strain => vec![("strain", strain_checks)],
        Suite::Oracle => vec![("oracle", oracle_checks)],
    };
    suites
        .par_iter()
        .flat_map_iter(|(name, f)| {
            f(seed, budget).into_iter().map(move |(check, pass, detail)| CheckResult {
                suite: name,
                name: check,
                pass,
                detail,
            })
        })
        .collect()
}

type Check = (&'static str, bool, String);
type SuiteFn = fn(u64, Budget) -> Vec<Check>;

fn random_metric(rng: &mut SeededRng) -> IsotropicMetric {
    IsotropicMetric::new(
        rng.random_range(0.0..2.0),
        rng.random_range(0.2..2.0),
        rng.random_range(-2.0..-0.05),
    )
    .expect("ranges give valid metrics")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Runs `trial` `count` times; reports the worst error against `tol`.
fn trials<F>(name: &'static str, count: usize, tol: f64, mut trial: F) -> Check
where
    F: FnMut(usize) -> f64,
{
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for i in 0..count {
        let e = trial(i);
        if !(e <= tol) {
            failures += 1;
        }
        worst = worst.max(e);
    }
    (
        name,
        failures == 0,
        format!("{}/{count} within {tol:.0e}, worst {worst:.2e}", count - failures),
    )
}

fn metric_checks(seed: u64, b: Budget) -> Vec<Check> {
    let mut rng = seeded(seed ^ 0x6d65_7472);
    let mut out = Vec::new();

    out.push(trials("orthogonality", b.trials, 1e-14, |i| {
        let n = 2 + i % 3;
        let m = random_metric(&mut rng);
        let s = random_symmetric(n, &mut rng);
        let w = random_skew(n, &mut rng);
        m.inner(&s, &w).unwrap().abs() / (s.frobenius_norm() * w.frobenius_norm())
    }));

    out.push(trials("commutator-identity", b.trials, 1e-10, |i| {
        let n = 2 + i % 3;
        let m = random_metric(&mut rng);
        let x = gaussian_matrix(n, &mut rng);
        let y = gaussian_matrix(n, &mut rng);
        let lhs = m.inner(&x, &y.commutator(&x)).unwrap();
        let rhs = m.kappa() * m.inner(&x.commutator(&x.transpose()), &y).unwrap();
        let scale = m.norm(&x).powi(2) * m.norm(&y) + lhs.abs();
        (lhs - rhs).abs() / scale
    }));

    out.push(trials("isotropy-both-signs", b.trials, 1e-10, |i| {
        let n = 2 + i % 3;
        let m = random_metric(&mut rng);
        let x = gaussian_matrix(n, &mut rng);
        let y = gaussian_matrix(n, &mut rng);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let u = random_orthogonal(n, sign, &mut rng);
        isotropy_defect(|p, q| m.inner(p, q).unwrap(), &x, &y, &u)
    }));

    out.push(trials("positive-definite", b.trials, 0.0, |i| {
        let n = 1 + i % 4;
        let m = random_metric(&mut rng);
        let x = gaussian_matrix(n, &mut rng);
        if m.inner(&x, &x).unwrap() > 0.0 {
            0.0
        } else {
            1.0
        }
    }));

    out.push(trials("left-invariance", b.trials, 1e-9, |i| {
        let n = 2 + i % 3;
        let kind = MetricKind::LeftInvariant(random_metric(&mut rng));
        let base = random_gl_plus(n, 10.0, &mut rng);
        let c = random_gl_plus(n, 10.0, &mut rng);
        let x = gaussian_matrix(n, &mut rng);
        let y = gaussian_matrix(n, &mut rng);
        let v0 = kind.inner_at(&base, &x, &y).unwrap();
        let v1 = kind
            .inner_at(&c.matmul(&base), &c.matmul(&x), &c.matmul(&y))
            .unwrap();
        let scale = (kind.norm_sq_at(&base, &x).unwrap() * kind.norm_sq_at(&base, &y).unwrap()).sqrt();
        (v1 - v0).abs() / scale
    }));

    out.push(trials("symmetrized-inverse-pullback", b.trials, 1e-9, |i| {
        // inversion maps X at B to −B⁻¹XB⁻¹ at B⁻¹ and preserves g + i*g
        let n = 2 + i % 3;
        let kind = MetricKind::SymmetrizedLeftInvariant(random_metric(&mut rng));
        let base = random_gl_plus(n, 10.0, &mut rng);
        let inv = base.inverse().unwrap();
        let x = gaussian_matrix(n, &mut rng);
        let y = gaussian_matrix(n, &mut rng);
        let push = |z: &Matrix| -&inv.matmul(z).matmul(&inv);
        let v0 = kind.inner_at(&base, &x, &y).unwrap();
        let v1 = kind.inner_at(&inv, &push(&x), &push(&y)).unwrap();
        let scale = (kind.norm_sq_at(&base, &x).unwrap() * kind.norm_sq_at(&base, &y).unwrap()).sqrt();
        (v1 - v0).abs() / scale
    }));

    // a non-isotropic form must be caught
    let m = IsotropicMetric::new(0.0, 1.0, -1.0).unwrap();
    let perturbed = |x: &Matrix, y: &Matrix| m.inner(x, y).unwrap() + x.trace() * y[(0, 1)];
    let caught = !check_isotropy_of(perturbed, 3, 20, &mut rng);
    out.push((
        "detects-non-isotropic",
        caught,
        format!("perturbed form rejected: {caught}"),
    ));
    out
}

fn geodesy_checks(seed: u64, b: Budget) -> Vec<Check> {
    let mut rng = seeded(seed ^ 0x6765_6f64);
    let mut out = Vec::new();
    let runs = b.trials / 10;

    out.push(trials("closed-form-vs-rk4", runs, 1e-7, |i| {
        let n = 2 + i % 2;
        let m = random_metric(&mut rng);
        let x0 = gaussian_matrix(n, &mut rng).scale(0.5);
        let a = random_gl_plus(n, 10.0, &mut rng);
        let g = GeodesicSpec::new(a, x0, m).unwrap();
        let closed = g.eval(1.0);
        let rk4 = g.integrate(1.0, 2000).unwrap();
        (&closed - &rk4).frobenius_norm() / closed.frobenius_norm().max(1.0)
    }));

    out.push(trials("ode-residual", runs, 1e-6, |i| {
        let n = 2 + i % 2;
        let m = random_metric(&mut rng);
        let x0 = gaussian_matrix(n, &mut rng).scale(0.5);
        let (t, h) = (0.6, 1e-5);
        let fd = (&ode_solution(&m, &x0, t + h) - &ode_solution(&m, &x0, t - h)).scale(0.5 / h);
        (&fd - &geodesic_ode_rhs(&m, &ode_solution(&m, &x0, t))).frobenius_norm()
    }));

    out.push(trials("constant-speed", b.trials, 1e-10, |i| {
        let n = 2 + i % 3;
        let m = random_metric(&mut rng);
        let x0 = gaussian_matrix(n, &mut rng).scale(0.5);
        rel(m.norm(&ode_solution(&m, &x0, 0.8)), m.norm(&x0))
    }));

    out.push(trials("left-translation", b.trials, 1e-12, |i| {
        let n = 2 + i % 2;
        let m = random_metric(&mut rng);
        let a = random_gl_plus(n, 10.0, &mut rng);
        let c = random_gl_plus(n, 10.0, &mut rng);
        let x0 = gaussian_matrix(n, &mut rng).scale(0.5);
        let lhs = GeodesicSpec::new(c.matmul(&a), x0.clone(), m).unwrap().eval(0.7);
        let rhs = c.matmul(&GeodesicSpec::new(a, x0, m).unwrap().eval(0.7));
        (&lhs - &rhs).frobenius_norm() / lhs.frobenius_norm()
    }));

    out.push(trials("sampled-geodesic-length", runs, 1e-4, |i| {
        // the geodesic A → O(A) has length equal to the geodesic strain
        let n = 2 + i % 2;
        let m = random_metric(&mut rng);
        let a = random_gl_plus(n, 20.0, &mut rng);
        let pd = strainlab::polar(&a).unwrap();
        let velocity = -&spd_log(&pd.stretch).unwrap();
        let nodes = GeodesicSpec::new(a.clone(), velocity, m).unwrap().sample(1.0, 256);
        let length = DiscretePath::new(nodes, MetricKind::LeftInvariant(m))
            .unwrap()
            .length()
            .unwrap();
        rel(length, geodesic_strain(&m, &a).unwrap().value)
    }));

    // the chord-midpoint error falls off like K⁻²
    let m = IsotropicMetric::new(0.5, 1.0, -1.0).unwrap();
    let a = Matrix::from_diag(&[3.0, 0.4]);
    let exact = geodesic_strain(&m, &a).unwrap().value;
    let g = GeodesicSpec::new(a.clone(), -&spd_log(&a).unwrap(), m).unwrap();
    let errors: Vec<f64> = [16, 32, 64, 128]
        .iter()
        .map(|&k| {
            let path = DiscretePath::new(g.sample(1.0, k), MetricKind::LeftInvariant(m)).unwrap();
            (path.length().unwrap() - exact).abs()
        })
        .collect();
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = ratios.iter().all(|r| (3.5..4.5).contains(r));
    out.push((
        "length-refinement",
        ok,
        format!("error ratios per doubling {ratios:.3?}"),
    ));
    out
}

fn strain_checks(seed: u64, b: Budget) -> Vec<Check> {
    let mut rng = seeded(seed ^ 0x7374_7261);
    let mut out = Vec::new();

    out.push(trials("bi-rotation-invariance", b.trials, 1e-9, |i| {
        let n = 2 + i % 3;
        let m = random_metric(&mut rng);
        let a = random_gl_plus(n, 100.0, &mut rng);
        let u = random_rotation(n, &mut rng);
        let v = random_rotation(n, &mut rng);
        let moved = u.matmul(&a).matmul(&v.transpose());
        StrainKind::ALL
            .iter()
            .map(|&k| {
                let r0 = strain(k, Some(&m), &a).unwrap();
                let r1 = strain(k, Some(&m), &moved).unwrap();
                let expected = u.matmul(&r0.minimizer).matmul(&v.transpose());
                rel(r1.value, r0.value).max((&r1.minimizer - &expected).max_abs())
            })
            .fold(0.0, f64::max)
    }));

    out.push(trials("inverse-invariance", b.trials, 1e-9, |i| {
        let n = 2 + i % 3;
        let m = random_metric(&mut rng);
        let a = random_gl_plus(n, 100.0, &mut rng);
        let a_inv = a.inverse().unwrap();
        StrainKind::ALL
            .iter()
            .filter(|k| k.is_inverse_invariant())
            .map(|&k| {
                let v0 = strain(k, Some(&m), &a).unwrap().value;
                rel(strain(k, Some(&m), &a_inv).unwrap().value, v0)
            })
            .fold(0.0, f64::max)
    }));

    out.push(trials("zero-on-rotations", b.trials, 1e-12, |i| {
        let n = 2 + i % 3;
        let m = random_metric(&mut rng);
        let q = random_rotation(n, &mut rng);
        StrainKind::ALL
            .iter()
            .map(|&k| strain(k, Some(&m), &q).unwrap().value)
            .fold(0.0, f64::max)
    }));

    out.push(trials("minimizer-in-SO(n)", b.trials, 1e-10, |i| {
        let n = 2 + i % 3;
        let a = random_gl_plus(n, 100.0, &mut rng);
        let q = euclidean_strain_ext(&a).unwrap().minimizer;
        q.orthogonality_defect().max((q.det() - 1.0).abs())
    }));

    out.push(trials("intrinsic-equals-extrinsic", b.trials, 0.0, |i| {
        let a = random_gl_plus(2 + i % 3, 100.0, &mut rng);
        let ext = euclidean_strain_ext(&a).unwrap().value;
        let int = euclidean_strain_int(&a).unwrap().value;
        (ext - int).abs()
    }));

    let m = IsotropicMetric::new(0.0, 1.0, -1.0).unwrap();
    let bench = geodesic_strain(&m, &Matrix::from_diag(&[2.0, 0.5])).unwrap().value;
    let target = std::f64::consts::SQRT_2 * std::f64::consts::LN_2;
    out.push((
        "benchmark-value",
        (bench - target).abs() <= 1e-9,
        format!("diag(2,1/2): {bench:.12} vs {target:.12}"),
    ));

    let witness_hi = euclidean_strain_ext(&Matrix::from_diag(&[3.0, 1.0])).unwrap().value;
    let witness_lo = euclidean_strain_ext(&Matrix::from_diag(&[1.0 / 3.0, 1.0])).unwrap().value;
    let sym = symmetrized_euclidean_strain(&Matrix::from_diag(&[3.0, 1.0])).unwrap().value;
    out.push((
        "euclidean-not-inverse-invariant",
        witness_hi != witness_lo && (sym - (witness_hi + witness_lo)).abs() < 1e-12,
        format!("diag(3,1): {witness_hi}, diag(1/3,1): {witness_lo:.6}, symmetrized {sym:.6}"),
    ));
    out
}

fn oracle_checks(seed: u64, b: Budget) -> Vec<Check> {
    let mut rng = seeded(seed ^ 0x6f72_6163);
    let mut out = Vec::new();
    let grid = RotationSampler::new(2, 0, SamplingScheme::GridAngle { step: 1e-4 }).unwrap();

    out.push(trials("grid-search-n2", b.oracle_runs * 2, 1e-5, |_| {
        let a = random_gl_plus(2, 100.0, &mut rng);
        let closed = euclidean_strain_ext(&a).unwrap().value;
        let found = min_over_rotations(&a, RotationObjective::FrobeniusDistance, &grid).unwrap();
        (found.value - closed).abs()
    }));

    out.push(trials("sampled-n3-never-beats-polar", b.oracle_runs, 1e-9, |i| {
        let a = random_gl_plus(3, 100.0, &mut rng);
        let closed = euclidean_strain_ext(&a).unwrap().value;
        let sampler = RotationSampler::new(
            3,
            seed.wrapping_add(i as u64),
            SamplingScheme::UniformRandom { samples: b.samples },
        )
        .unwrap();
        let found = min_over_rotations(&a, RotationObjective::FrobeniusDistance, &sampler).unwrap();
        (closed - found.value).max(0.0)
    }));

    out.push(trials("symmetrized-grid-search", b.oracle_runs, 1e-5, |_| {
        let a = random_gl_plus(2, 20.0, &mut rng);
        let closed = symmetrized_euclidean_strain(&a).unwrap().value;
        let found = min_over_rotations(&a, RotationObjective::SymmetrizedFrobenius, &grid).unwrap();
        (found.value - closed).abs()
    }));

    let cfg = PathOptimizerConfig::default();
    out.push(trials("path-optimizer-geodesic", b.oracle_runs, 1e-2, |_| {
        let m = random_metric(&mut rng);
        let a = random_gl_plus(2, 100.0, &mut rng);
        let closed = geodesic_strain(&m, &a).unwrap().value;
        let r = intrinsic_distance_to_son(&a, MetricKind::LeftInvariant(m), &cfg).unwrap();
        rel(r.value, closed)
    }));

    out.push(trials("path-optimizer-euclidean", b.oracle_runs, 5e-3, |_| {
        let a = random_gl_plus(2, 20.0, &mut rng);
        let closed = euclidean_strain_ext(&a).unwrap().value;
        let r = intrinsic_distance_to_son(&a, MetricKind::EuclideanFrobenius, &cfg).unwrap();
        rel(r.value, closed)
    }));

    let mut decreasing = true;
    let mut exact = true;
    let mut prev = f64::INFINITY;
    for k in 0..=20 {
        let d = biinvariance_counterexample(2, k).unwrap().frobenius_to_identity;
        exact &= d == 2f64.powi(-(k as i32));
        decreasing &= d < prev;
        prev = d;
    }
    out.push((
        "biinvariance-counterexample",
        exact && decreasing,
        format!("distances 2^-k for k = 0..20: exact {exact}, strictly decreasing {decreasing}"),
    ));

    let exit = segment_exit_point(&Matrix::identity(2), &Matrix::from_diag(&[-1.0, -2.0]));
    out.push((
        "segment-leaves-glplus",
        exit.is_some_and(|t| (t - 1.0 / 3.0).abs() < 1e-12),
        format!("segment I -> diag(-1,-2) leaves at t = {exit:?}"),
    ));
    out
}
