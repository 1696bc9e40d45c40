//! Independent numerical checks for the closed forms: brute-force search over
//! rotations, discrete path relaxation, and explicit counterexamples.

mod path_opt;
mod sampler;
mod witness;

pub use path_opt::{
    intrinsic_distance_from, intrinsic_distance_to_son, relax_path, PathOptimizerConfig,
    PathOptimum,
};
pub use sampler::{RotationIter, RotationSampler, SamplingScheme};
pub use witness::{
    biinvariance_counterexample, halving_diagonal, segment_exit_point, segment_exits_glnplus,
    unit_bidiagonal, Conjugate,
};

use crate::error::{Error, Result};
use crate::matcore::Matrix;

/// Objective minimized by [`min_over_rotations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationObjective {
    /// ‖A − Q‖_F.
    FrobeniusDistance,
    /// ‖A − Q‖_F + ‖A⁻¹ − Qᵀ‖_F.
    SymmetrizedFrobenius,
}

#[derive(Debug, Clone)]
pub struct RotationSearch {
    pub value: f64,
    pub argmin: Matrix,
    pub evaluated: usize,
}

/// Smallest objective value over the rotations produced by `sampler`.
/// Ties keep the first sample.
pub fn min_over_rotations(
    a: &Matrix,
    objective: RotationObjective,
    sampler: &RotationSampler,
) -> Result<RotationSearch> {
    if a.n() != sampler.n() {
        return Err(Error::DimensionMismatch(a.n(), sampler.n()));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let a_inv = match objective {
        RotationObjective::FrobeniusDistance => None,
        RotationObjective::SymmetrizedFrobenius => Some(a.inverse()?),
    };
    let mut best: Option<(f64, Matrix)> = None;
    let mut evaluated = 0;
    for q in sampler {
        evaluated += 1;
        let mut v = (a - &q).frobenius_norm();
        if let Some(inv) = &a_inv {
            v += (inv - &q.transpose()).frobenius_norm();
        }
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, q));
        }
    }
    let (value, argmin) =
        best.ok_or_else(|| Error::InvalidArgument("sampler produced no rotations".into()))?;
    Ok(RotationSearch {
        value,
        argmin,
        evaluated,
    })
}
