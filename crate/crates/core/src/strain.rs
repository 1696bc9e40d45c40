//! Strain measures: distances of A ∈ GL(n)⁺ from SO(n).
//!
//! For every measure here the closest rotation is the orthogonal polar factor
//! of A, and each value is a closed-form function of the singular values σᵢ:
//!
//! | kind                          | value                                        |
//! |-------------------------------|----------------------------------------------|
//! | geodesic                      | √(α(Σ log σᵢ)² + β Σ (log σᵢ)²)              |
//! | Euclidean (ext. and int.)     | ‖√(AᵀA) − I‖_F = √Σ(σᵢ − 1)²                 |
//! | symmetrized Euclidean         | Euclidean(A) + Euclidean(A⁻¹)                |
//! | symmetrized geodesic distance | 2 · geodesic                                 |
//! | symmetrized geodesic metric   | √2 · geodesic                                |
//!
//! The γ parameter of the metric never enters: minimizing velocities are
//! symmetric, and γ only weighs the skew block. The geodesic measures still
//! take and validate the full metric.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matcore::{polar, svd_special, Matrix};
use crate::metric::IsotropicMetric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrainKind {
    Geodesic,
    EuclideanExtrinsic,
    EuclideanIntrinsic,
    SymmetrizedEuclidean,
    SymmetrizedGeodesicDistance,
    SymmetrizedGeodesicMetric,
}

impl StrainKind {
    pub const ALL: [StrainKind; 6] = [
        StrainKind::Geodesic,
        StrainKind::EuclideanExtrinsic,
        StrainKind::EuclideanIntrinsic,
        StrainKind::SymmetrizedEuclidean,
        StrainKind::SymmetrizedGeodesicDistance,
        StrainKind::SymmetrizedGeodesicMetric,
    ];

    /// Command-line spelling.
    pub fn name(&self) -> &'static str {
        match self {
            StrainKind::Geodesic => "geodesic",
            StrainKind::EuclideanExtrinsic => "euclidean-ext",
            StrainKind::EuclideanIntrinsic => "euclidean-int",
            StrainKind::SymmetrizedEuclidean => "sym-euclidean",
            StrainKind::SymmetrizedGeodesicDistance => "sym-geodesic-dist",
            StrainKind::SymmetrizedGeodesicMetric => "sym-geodesic-metric",
        }
    }

    pub fn needs_metric(&self) -> bool {
        matches!(
            self,
            StrainKind::Geodesic
                | StrainKind::SymmetrizedGeodesicDistance
                | StrainKind::SymmetrizedGeodesicMetric
        )
    }

    /// Whether strain(A) = strain(A⁻¹) holds for this kind.
    pub fn is_inverse_invariant(&self) -> bool {
        !matches!(
            self,
            StrainKind::EuclideanExtrinsic | StrainKind::EuclideanIntrinsic
        )
    }
}

impl fmt::Display for StrainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrainKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown strain measure '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct StrainReport {
    pub kind: StrainKind,
    pub value: f64,
    /// The closest rotation to the input.
    pub minimizer: Matrix,
    pub metric: Option<IsotropicMetric>,
}

fn geodesic_value(m: &IsotropicMetric, sigma: &[f64]) -> f64 {
    let logs: Vec<f64> = sigma.iter().map(|s| s.ln()).collect();
    let sum: f64 = logs.iter().sum();
    let sum_sq: f64 = logs.iter().map(|l| l * l).sum();
    (m.alpha() * sum * sum + m.beta() * sum_sq).sqrt()
}

fn euclidean_value(sigma: &[f64]) -> f64 {
    sigma.iter().map(|s| (s - 1.0).powi(2)).sum::<f64>().sqrt()
}

fn rotation_factor(svd: &crate::matcore::SvdSpecial) -> Matrix {
    svd.u.matmul(&svd.v.transpose())
}

/// Geodesic distance to SO(n) under the left-invariant metric with
/// parameters `m`: √(α(Σ log σᵢ)² + β Σ (log σᵢ)²), equal to ‖log √(AᵀA)‖.
pub fn geodesic_strain(m: &IsotropicMetric, a: &Matrix) -> Result<StrainReport> {
    m.check_dimension(a.n())?;
    let svd = svd_special(a)?;
    Ok(StrainReport {
        kind: StrainKind::Geodesic,
        value: geodesic_value(m, &svd.sigma),
        minimizer: rotation_factor(&svd),
        metric: Some(*m),
    })
}

/// ‖√(AᵀA) − I‖_F, the Euclidean distance from SO(n).
pub fn euclidean_strain_ext(a: &Matrix) -> Result<StrainReport> {
    let svd = svd_special(a)?;
    Ok(StrainReport {
        kind: StrainKind::EuclideanExtrinsic,
        value: euclidean_value(&svd.sigma),
        minimizer: rotation_factor(&svd),
        metric: None,
    })
}

/// Intrinsic Euclidean distance from SO(n). It coincides with the extrinsic
/// one, minimizer included, so this shares its computation.
pub fn euclidean_strain_int(a: &Matrix) -> Result<StrainReport> {
    let mut r = euclidean_strain_ext(a)?;
    r.kind = StrainKind::EuclideanIntrinsic;
    Ok(r)
}

/// Euclidean strain of A plus that of A⁻¹. A⁻¹ has singular values 1/σᵢ.
pub fn symmetrized_euclidean_strain(a: &Matrix) -> Result<StrainReport> {
    let svd = svd_special(a)?;
    let inv_sigma: Vec<f64> = svd.sigma.iter().map(|s| 1.0 / s).collect();
    Ok(StrainReport {
        kind: StrainKind::SymmetrizedEuclidean,
        value: euclidean_value(&svd.sigma) + euclidean_value(&inv_sigma),
        minimizer: rotation_factor(&svd),
        metric: None,
    })
}

/// Strain under the symmetrized distance d(A,B) + d(A⁻¹,B⁻¹): twice the
/// geodesic strain.
pub fn symmetrized_geodesic_distance_strain(
    m: &IsotropicMetric,
    a: &Matrix,
) -> Result<StrainReport> {
    let mut r = geodesic_strain(m, a)?;
    r.kind = StrainKind::SymmetrizedGeodesicDistance;
    r.value *= 2.0;
    Ok(r)
}

/// Strain under the symmetrized metric g + i*g: √2 times the geodesic strain.
pub fn symmetrized_geodesic_metric_strain(
    m: &IsotropicMetric,
    a: &Matrix,
) -> Result<StrainReport> {
    let mut r = geodesic_strain(m, a)?;
    r.kind = StrainKind::SymmetrizedGeodesicMetric;
    r.value *= std::f64::consts::SQRT_2;
    Ok(r)
}

/// The rotation closest to A: its orthogonal polar factor.
pub fn closest_rotation(a: &Matrix) -> Result<Matrix> {
    Ok(polar(a)?.rotation)
}

/// Dispatches on `kind`; geodesic kinds require `metric`.
pub fn strain(kind: StrainKind, metric: Option<&IsotropicMetric>, a: &Matrix) -> Result<StrainReport> {
    let need = || {
        metric.ok_or_else(|| {
            Error::InvalidMetric(format!("measure '{kind}' requires alpha, beta and gamma"))
        })
    };
    match kind {
        StrainKind::Geodesic => geodesic_strain(need()?, a),
        StrainKind::EuclideanExtrinsic => euclidean_strain_ext(a),
        StrainKind::EuclideanIntrinsic => euclidean_strain_int(a),
        StrainKind::SymmetrizedEuclidean => symmetrized_euclidean_strain(a),
        StrainKind::SymmetrizedGeodesicDistance => symmetrized_geodesic_distance_strain(need()?, a),
        StrainKind::SymmetrizedGeodesicMetric => symmetrized_geodesic_metric_strain(need()?, a),
    }
}
