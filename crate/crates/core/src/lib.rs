//! Strain measures on GL(n)⁺.
//!
//! A strain measure is a distance from a deformation gradient A with
//! det A > 0 to the rotation group SO(n). This crate provides closed forms
//! for the geodesic distance under left-invariant, right-O(n)-invariant
//! metrics, for the Euclidean distance and for their symmetrized variants,
//! together with the linear algebra they need and brute-force oracles that
//! check the closed forms independently.
//!
//! ```
//! use strainlab::{geodesic_strain, IsotropicMetric, Matrix};
//!
//! let metric = IsotropicMetric::new(0.0, 1.0, -1.0).unwrap();
//! let a = Matrix::from_diag(&[2.0, 0.5]);
//! let r = geodesic_strain(&metric, &a).unwrap();
//! assert!((r.value - 2f64.sqrt() * 2f64.ln()).abs() < 1e-12);
//! ```

// `!(x > y)` forms are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geodesy;
pub mod matcore;
pub mod metric;
pub mod oracle;
pub mod random;
pub mod strain;

pub use error::{Error, Result};
pub use geodesy::{DiscretePath, GeodesicSpec};
pub use matcore::{mat_exp, polar, spd_log, svd_special, sym_eigen, Matrix};
pub use metric::{IsotropicMetric, MetricKind};
pub use strain::{
    closest_rotation, euclidean_strain_ext, euclidean_strain_int, geodesic_strain, strain,
    symmetrized_euclidean_strain, symmetrized_geodesic_distance_strain,
    symmetrized_geodesic_metric_strain, StrainKind, StrainReport,
};
