use super::{sym_eigen, Matrix};
use crate::error::{Error, Result};

const SINGULAR_RTOL: f64 = 1e-12;
const DRIFT_TOL: f64 = 1e-12;

/// SVD A = U·diag(σ)·Vᵀ with U, V ∈ SO(n) and σ positive, descending.
#[derive(Debug, Clone)]
pub struct SvdSpecial {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl SvdSpecial {
    pub fn reconstruct(&self) -> Matrix {
        self.u
            .matmul(&Matrix::from_diag(&self.sigma))
            .matmul(&self.v.transpose())
    }

    /// √(AᵀA) = V·diag(σ)·Vᵀ.
    pub fn stretch(&self) -> Matrix {
        self.v
            .matmul(&Matrix::from_diag(&self.sigma))
            .matmul(&self.v.transpose())
            .sym_part()
    }
}

/// Polar decomposition A = O·P with O ∈ SO(n) and P symmetric positive-definite.
#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    pub rotation: Matrix,
    pub stretch: Matrix,
}

/// Singular value decomposition of a matrix with positive determinant, with
/// both orthogonal factors in SO(n).
///
/// V and σ² come from the Jacobi eigen-decomposition of AᵀA; σᵢ = ‖A vᵢ‖ and
/// U = A V diag(1/σ). If U drifts from orthogonality by more than 1e-12 it
/// gets one Newton–Schulz polar correction. Accuracy degrades for condition
/// numbers beyond about 1e4, since AᵀA squares the condition number.
///
/// When the eigenvector matrix has determinant −1 the last columns of U and V
/// are both negated; Σ is diagonal, so the product is unchanged.
pub fn svd_special(a: &Matrix) -> Result<SvdSpecial> {
    let n = a.n();
    let ata = a.transpose().matmul(a);
    let eig = sym_eigen(&ata)?;

    let mut cols: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..n)
        .map(|j| {
            let vj = eig.vectors.column(j);
            let w = a.apply(&vj);
            let s = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            (s, vj, w)
        })
        .collect();

    let smax = cols.iter().fold(0.0f64, |m, c| m.max(c.0));
    let smin = cols.iter().fold(f64::INFINITY, |m, c| m.min(c.0));
    if !(smax > 0.0) || smin < SINGULAR_RTOL * smax {
        return Err(Error::SingularInput);
    }
    let det = a.det();
    if det <= 0.0 {
        return Err(Error::NegativeDeterminant(det));
    }

    // σ computed as ‖A vᵢ‖ may reorder near-ties; the sort is stable
    cols.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut u = Matrix::zeros(n);
    let mut v = Matrix::zeros(n);
    let mut sigma = Vec::with_capacity(n);
    for (j, (s, vj, w)) in cols.into_iter().enumerate() {
        let uj: Vec<f64> = w.iter().map(|x| x / s).collect();
        u.set_column(j, &uj);
        v.set_column(j, &vj);
        sigma.push(s);
    }

    if u.orthogonality_defect() > DRIFT_TOL {
        // U ← U (3I − UᵀU) / 2
        let utu = u.transpose().matmul(&u);
        let corr = (&Matrix::identity(n).scale(3.0) - &utu).scale(0.5);
        u = u.matmul(&corr);
    }

    if v.det() < 0.0 {
        for i in 0..n {
            v[(i, n - 1)] = -v[(i, n - 1)];
            u[(i, n - 1)] = -u[(i, n - 1)];
        }
    }

    Ok(SvdSpecial { u, sigma, v })
}

/// Polar decomposition via [`svd_special`]: O = U Vᵀ, P = V diag(σ) Vᵀ.
pub fn polar(a: &Matrix) -> Result<PolarDecomposition> {
    let svd = svd_special(a)?;
    Ok(PolarDecomposition {
        rotation: svd.u.matmul(&svd.v.transpose()),
        stretch: svd.stretch(),
    })
}

/// The unique symmetric logarithm of a symmetric positive-definite matrix.
pub fn spd_log(p: &Matrix) -> Result<Matrix> {
    let eig = sym_eigen(p).map_err(|e| match e {
        Error::NotSymmetric { .. } => Error::NotSpd,
        other => other,
    })?;
    if eig.values.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::NotSpd);
    }
    Ok(eig.map_values(f64::ln))
}
