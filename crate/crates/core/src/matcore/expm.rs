use super::Matrix;

const TAYLOR_ORDER: u32 = 18;
const SCALED_NORM: f64 = 0.5;

/// Matrix exponential by scaling and squaring.
///
/// X is scaled by 2⁻ˢ so that ‖X/2ˢ‖_F ≤ 0.5, the exponential of the scaled
/// matrix is taken from an order-18 Taylor polynomial (Horner form), and the
/// result is squared s times. The truncation error at that norm is below
/// 1e-22, so the rounding in the squarings dominates.
pub fn mat_exp(x: &Matrix) -> Matrix {
    let n = x.n();
    let norm = x.frobenius_norm();
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let y = x.scale(0.5f64.powi(squarings));

    let id = Matrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_ORDER).rev() {
        // acc ← I + (Y/k)·acc
        acc = id.add_scaled(1.0 / f64::from(k), &y.matmul(&acc));
    }
    for _ in 0..squarings {
        acc = acc.matmul(&acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(mat_exp(&Matrix::zeros(3)), Matrix::identity(3));
    }

    #[test]
    fn quarter_turn() {
        let w = Matrix::from_rows(&[[0.0, -FRAC_PI_2], [FRAC_PI_2, 0.0]]).unwrap();
        let r = mat_exp(&w);
        let expected = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!((&r - &expected).max_abs() < 1e-14, "{r:?}");
    }

    #[test]
    fn diagonal_logs() {
        let r = mat_exp(&Matrix::from_diag(&[LN_2, 3f64.ln()]));
        assert!((&r - &Matrix::from_diag(&[2.0, 3.0])).max_abs() < 1e-14);
        assert_eq!(r[(0, 1)], 0.0);
    }

    #[test]
    fn large_norm_scalar() {
        let r = mat_exp(&Matrix::from_diag(&[20.0]));
        assert!((r[(0, 0)] / 20f64.exp() - 1.0).abs() < 1e-13);
        let r = mat_exp(&Matrix::from_diag(&[-20.0]));
        assert!((r[(0, 0)] / (-20f64).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        let x = Matrix::from_rows(&[[0.0, 3.0], [0.0, 0.0]]).unwrap();
        let r = mat_exp(&x);
        let expected = Matrix::from_rows(&[[1.0, 3.0], [0.0, 1.0]]).unwrap();
        assert!((&r - &expected).max_abs() < 1e-14);
    }
}
