//! Dense square-matrix arithmetic and the decompositions the strain
//! computations rest on: symmetric eigen, SVD with special-orthogonal factors,
//! polar decomposition, matrix exponential and SPD logarithm.

mod eigen;
mod expm;
mod matrix;
mod svd;

pub use eigen::{sym_eigen, SymEigen};
pub use expm::mat_exp;
pub use matrix::Matrix;
pub use svd::{polar, spd_log, svd_special, PolarDecomposition, SvdSpecial};
