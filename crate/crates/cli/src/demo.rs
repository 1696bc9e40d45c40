//! Demonstration tables, written to standard output as CSV.

use std::io::{self, BufWriter, Write};

use clap::{Args, Subcommand};
use strainlab::oracle::biinvariance_counterexample;
use strainlab::{polar, spd_log, strain, GeodesicSpec, Matrix, StrainKind};

use crate::compute::parse_kind;
use crate::io::{fmt_num, parse_matrices, read_source};
use crate::{CliError, MetricArgs, EXIT_OK};

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[command(subcommand)]
    pub demo: Demo,
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Conjugates D⁻ᵏAD^k approaching I while any bi-invariant distance
    /// would keep them at d(A, I).
    BiInvariance {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        kmax: u32,
    },
    /// Strain of diag(t, 1, …, 1) on log-spaced t in [tmin, tmax].
    Divergence {
        #[arg(long, value_parser = parse_kind)]
        measure: StrainKind,
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// Samples of the minimizing geodesic from the closest rotation to the
    /// first matrix of the input file.
    GeodesicTrace {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

pub fn run(args: &DemoArgs) -> Result<u8, CliError> {
    let stdout = io::stdout().lock();
    let mut out = BufWriter::new(stdout);
    match &args.demo {
        Demo::BiInvariance { n, kmax } => bi_invariance(&mut out, *n, *kmax)?,
        Demo::Divergence {
            measure,
            tmin,
            tmax,
            points,
            n,
            metric,
        } => {
            let m = metric.resolve(Some(*measure))?;
            divergence(&mut out, *measure, m.as_ref(), *tmin, *tmax, *points, *n)?
        }
        Demo::GeodesicTrace {
            metric,
            input,
            samples,
        } => {
            let m = metric.require()?;
            let matrices = parse_matrices(input, &read_source(input)?)?;
            geodesic_trace(&mut out, &m, &matrices[0].matrix, *samples)?
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

pub fn bi_invariance<W: Write>(out: &mut W, n: usize, kmax: u32) -> Result<(), CliError> {
    let base = biinvariance_counterexample(n, 0).map_err(|e| CliError::Usage(e.to_string()))?;
    if kmax > 60 {
        return Err(CliError::Usage("--kmax must be at most 60".into()));
    }
    // a bi-invariant distance would keep every conjugate at d(A, I)
    let d_a_i = fmt_num(base.frobenius_to_identity);
    writeln!(out, "k,frobenius_to_I,d_A_I")?;
    for k in 0..=kmax {
        let c = biinvariance_counterexample(n, k).map_err(|e| CliError::Usage(e.to_string()))?;
        writeln!(out, "{k},{},{d_a_i}", fmt_num(c.frobenius_to_identity))?;
    }
    Ok(())
}

pub fn divergence<W: Write>(
    out: &mut W,
    kind: StrainKind,
    metric: Option<&strainlab::IsotropicMetric>,
    tmin: f64,
    tmax: f64,
    points: usize,
    n: usize,
) -> Result<(), CliError> {
    if !(tmin > 0.0 && tmin <= tmax && tmax.is_finite()) {
        return Err(CliError::Usage("need 0 < tmin <= tmax < inf".into()));
    }
    if points < 2 || n < 1 {
        return Err(CliError::Usage("need --points >= 2 and --n >= 1".into()));
    }
    let (lo, hi) = (tmin.ln(), tmax.ln());
    writeln!(out, "t,strain")?;
    for i in 0..points {
        let t = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
        let mut d = vec![1.0; n];
        d[0] = t;
        let value = strain(kind, metric, &Matrix::from_diag(&d))
            .map(|r| fmt_num(r.value))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        writeln!(out, "{},{value}", fmt_num(t))?;
    }
    Ok(())
}

/// γ(t) = O·exp(t log P) for t = i/samples, the geodesic from the polar
/// factor O of A = OP to A itself.
pub fn geodesic_trace<W: Write>(
    out: &mut W,
    metric: &strainlab::IsotropicMetric,
    a: &Matrix,
    samples: usize,
) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let usage = |e: strainlab::Error| CliError::Usage(e.to_string());
    let pd = polar(a).map_err(usage)?;
    let velocity = spd_log(&pd.stretch).map_err(usage)?;
    let geodesic = GeodesicSpec::new(pd.rotation, velocity, *metric).map_err(usage)?;
    let n = a.n();
    let header: Vec<String> = (0..n * n).map(|e| format!("m{}_{}", e / n, e % n)).collect();
    writeln!(out, "t,{}", header.join(","))?;
    for i in 0..=samples {
        let t = i as f64 / samples as f64;
        let g = geodesic.eval(t);
        let cells: Vec<String> = g.as_slice().iter().map(|&x| fmt_num(x)).collect();
        writeln!(out, "{},{}", fmt_num(t), cells.join(","))?;
    }
    Ok(())
}
