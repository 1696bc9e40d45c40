use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 30;
const OFF_DIAGONAL_RTOL: f64 = 1e-14;
const SYMMETRY_RTOL: f64 = 1e-10;

/// Eigen-decomposition S = Q·diag(λ)·Qᵀ of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Orthogonal matrix whose columns are the eigenvectors.
    pub vectors: Matrix,
    /// Eigenvalues in descending order, matching the columns of `vectors`.
    pub values: Vec<f64>,
}

impl SymEigen {
    pub fn reconstruct(&self) -> Matrix {
        let mut scaled = self.vectors.clone();
        let n = scaled.n();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        scaled.matmul(&self.vectors.transpose())
    }

    /// Q·diag(f(λ))·Qᵀ, symmetrized.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let mapped = SymEigen {
            vectors: self.vectors.clone(),
            values: self.values.iter().map(|&l| f(l)).collect(),
        };
        mapped.reconstruct().sym_part()
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Symmetric eigensolver using cyclic Jacobi rotations.
///
/// Sweeps over every off-diagonal pair until the off-diagonal Frobenius norm
/// drops below 1e-14·‖S‖_F, with a budget of 30 sweeps. Eigenvalues are
/// returned in descending order; ties keep the order produced by the sweeps.
pub fn sym_eigen(s: &Matrix) -> Result<SymEigen> {
    let norm = s.frobenius_norm();
    let asym = s.asymmetry();
    let tolerance = SYMMETRY_RTOL * norm;
    if asym > tolerance {
        return Err(Error::NotSymmetric {
            asymmetry: asym,
            tolerance,
        });
    }
    let n = s.n();
    let mut a = s.sym_part();
    let mut v = Matrix::identity(n);
    let threshold = OFF_DIAGONAL_RTOL * norm;

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweep = 0;
    while !converged && sweep < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.0
                } else {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let sn = t * c;
                // A ← Jᵀ A J with J the (p, q) plane rotation [[c, s], [−s, c]].
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
        sweep += 1;
        converged = off_diagonal_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let diag = a.diagonal();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their sweep order
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let mut vectors = Matrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Ok(SymEigen {
        vectors,
        values: order.iter().map(|&i| diag[i]).collect(),
    })
}
