//! Seeded random matrices for property checks and oracle samplers.
//!
//! Everything here is driven by [`ChaCha8Rng`] so that a seed reproduces the
//! same matrices on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::Matrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let data = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_row_major(n, data).expect("gaussian entries are finite")
}

pub fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    gaussian_matrix(n, rng).sym_part()
}

pub fn random_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    gaussian_matrix(n, rng).skew_part()
}

/// Orthogonal matrix with the requested determinant sign (+1 or −1).
///
/// Gram–Schmidt on a Gaussian matrix (Haar distributed), then the last column
/// is negated if the determinant has the wrong sign.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, det_sign: f64, rng: &mut R) -> Matrix {
    loop {
        let g = gaussian_matrix(n, rng);
        let mut q = Matrix::zeros(n);
        let mut ok = true;
        for j in 0..n {
            let mut col = g.column(j);
            // modified Gram–Schmidt, twice for stability
            for _ in 0..2 {
                for k in 0..j {
                    let qk = q.column(k);
                    let d: f64 = col.iter().zip(&qk).map(|(a, b)| a * b).sum();
                    for (c, b) in col.iter_mut().zip(&qk) {
                        *c -= d * b;
                    }
                }
            }
            let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            col.iter_mut().for_each(|c| *c /= norm);
            q.set_column(j, &col);
        }
        if !ok {
            continue;
        }
        if q.det() * det_sign < 0.0 {
            for i in 0..n {
                q[(i, n - 1)] = -q[(i, n - 1)];
            }
        }
        return q;
    }
}

pub fn random_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    random_orthogonal(n, 1.0, rng)
}

/// Random U·diag(σ)·Vᵀ with U, V ∈ SO(n) and σ log-uniform so that the
/// condition number is at most `max_condition`.
pub fn random_gl_plus<R: Rng + ?Sized>(n: usize, max_condition: f64, rng: &mut R) -> Matrix {
    let half = 0.5 * max_condition.ln();
    let sigma: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-half..=half).exp())
        .collect();
    let u = random_rotation(n, rng);
    let v = random_rotation(n, rng);
    u.matmul(&Matrix::from_diag(&sigma)).matmul(&v.transpose())
}

/// Random SPD V·diag(λ)·Vᵀ with condition at most `max_condition`.
pub fn random_spd<R: Rng + ?Sized>(n: usize, max_condition: f64, rng: &mut R) -> Matrix {
    let half = 0.5 * max_condition.ln();
    let lambda: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-half..=half).exp())
        .collect();
    let v = random_rotation(n, rng);
    v.matmul(&Matrix::from_diag(&lambda))
        .matmul(&v.transpose())
        .sym_part()
}
