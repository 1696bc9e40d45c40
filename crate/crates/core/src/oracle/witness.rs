use crate::error::{Error, Result};
use crate::matcore::Matrix;

const DET_SAMPLES: usize = 1024;
const TANGENCY_RTOL: f64 = 1e-12;

/// D⁻ᵏ A Dᵏ for the unit upper-bidiagonal A and D = diag(2⁻¹, …, 2⁻ⁿ), with
/// its Frobenius distance to the identity.
///
/// Every conjugate is at the same distance from I as A under any
/// bi-invariant distance, yet the conjugates converge to I.
#[derive(Debug, Clone)]
pub struct Conjugate {
    pub matrix: Matrix,
    pub frobenius_to_identity: f64,
}

/// Unit upper-bidiagonal matrix: ones on the diagonal and superdiagonal.
pub fn unit_bidiagonal(n: usize) -> Matrix {
    let mut a = Matrix::identity(n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = 1.0;
    }
    a
}

/// diag(2⁻¹, 2⁻², …, 2⁻ⁿ).
pub fn halving_diagonal(n: usize) -> Matrix {
    let d: Vec<f64> = (1..=n as i32).map(|i| 0.5f64.powi(i)).collect();
    Matrix::from_diag(&d)
}

/// Closed form: every superdiagonal entry of D⁻ᵏ A Dᵏ equals 2⁻ᵏ.
pub fn biinvariance_counterexample(n: usize, k: u32) -> Result<Conjugate> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be >= 2".into()));
    }
    if k > 60 {
        return Err(Error::Overflow(k));
    }
    let entry = 0.5f64.powi(k as i32);
    let mut m = Matrix::identity(n);
    for i in 0..n - 1 {
        m[(i, i + 1)] = entry;
    }
    Ok(Conjugate {
        matrix: m,
        frobenius_to_identity: ((n - 1) as f64).sqrt() * entry,
    })
}

/// Whether det(A + t(B − A)) ≤ 0 somewhere on t ∈ [0, 1].
pub fn segment_exits_glnplus(a: &Matrix, b: &Matrix) -> bool {
    segment_exit_point(a, b).is_some()
}

/// First parameter where the segment [A, B] leaves GL(n)⁺, if any.
///
/// det is sampled at 1025 evenly spaced points (t = i/1024). Sign changes are
/// refined by bisection. Interior local minima of the sampled determinant
/// are refined by golden-section search and count as an exit when they reach
/// 1e-12 of the endpoint determinant scale, which catches tangential contact
/// with the singular set.
pub fn segment_exit_point(a: &Matrix, b: &Matrix) -> Option<f64> {
    let delta = b - a;
    let det_at = |t: f64| a.add_scaled(t, &delta).det();
    let ts: Vec<f64> = (0..=DET_SAMPLES).map(|i| i as f64 / DET_SAMPLES as f64).collect();
    let dets: Vec<f64> = ts.iter().map(|&t| det_at(t)).collect();
    let scale = dets[0].abs().max(dets[DET_SAMPLES].abs()).max(f64::MIN_POSITIVE);

    for i in 0..=DET_SAMPLES {
        if dets[i] <= 0.0 {
            if i == 0 {
                return Some(0.0);
            }
            // bracket [t_{i-1}, t_i] with det(t_{i-1}) > 0 ≥ det(t_i)
            let (mut lo, mut hi) = (ts[i - 1], ts[i]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if det_at(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(hi);
        }
    }

    let golden = 0.5 * (5f64.sqrt() - 1.0);
    for i in 1..DET_SAMPLES {
        if dets[i] <= dets[i - 1] && dets[i] <= dets[i + 1] {
            let (mut lo, mut hi) = (ts[i - 1], ts[i + 1]);
            let mut x1 = hi - golden * (hi - lo);
            let mut x2 = lo + golden * (hi - lo);
            let (mut f1, mut f2) = (det_at(x1), det_at(x2));
            for _ in 0..80 {
                if f1 < f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - golden * (hi - lo);
                    f1 = det_at(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + golden * (hi - lo);
                    f2 = det_at(x2);
                }
            }
            let (t_min, f_min) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
            if f_min <= TANGENCY_RTOL * scale {
                return Some(t_min);
            }
        }
    }
    None
}

/// Whether every one of `samples + 1` evenly spaced points on [A, B] has
/// positive determinant. A cheap feasibility test for optimizer steps.
pub(crate) fn segment_stays_positive(a: &Matrix, b: &Matrix, samples: usize) -> bool {
    let delta = b - a;
    (0..=samples).all(|i| a.add_scaled(i as f64 / samples as f64, &delta).det() > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_values() {
        let c = biinvariance_counterexample(2, 0).unwrap();
        assert_eq!(c.matrix, unit_bidiagonal(2));
        assert_eq!(c.frobenius_to_identity, 1.0);

        let c = biinvariance_counterexample(2, 10).unwrap();
        assert_eq!(c.matrix[(0, 1)], 2f64.powi(-10));
        assert_eq!(c.frobenius_to_identity, 2f64.powi(-10));

        let c = biinvariance_counterexample(3, 5).unwrap();
        assert_eq!(c.matrix[(0, 1)], 2f64.powi(-5));
        assert_eq!(c.matrix[(1, 2)], 2f64.powi(-5));
        assert_eq!(c.frobenius_to_identity, 2f64.sqrt() * 2f64.powi(-5));
    }

    #[test]
    fn closed_form_matches_explicit_conjugation() {
        for n in 2..=5 {
            let a = unit_bidiagonal(n);
            let d = halving_diagonal(n);
            let d_inv = d.inverse().unwrap();
            let mut dk = Matrix::identity(n);
            let mut dk_inv = Matrix::identity(n);
            for k in 0..=12u32 {
                let explicit = dk_inv.matmul(&a).matmul(&dk);
                let closed = biinvariance_counterexample(n, k).unwrap().matrix;
                assert_eq!(explicit, closed, "n = {n}, k = {k}");
                dk = dk.matmul(&d);
                dk_inv = dk_inv.matmul(&d_inv);
            }
        }
    }

    #[test]
    fn counterexample_guards() {
        assert_eq!(biinvariance_counterexample(2, 61).unwrap_err(), Error::Overflow(61));
        assert!(biinvariance_counterexample(1, 3).is_err());
    }

    #[test]
    fn segment_through_origin_touches_boundary() {
        let i = Matrix::identity(2);
        let neg = Matrix::from_diag(&[-1.0, -1.0]);
        assert_eq!(segment_exit_point(&i, &neg), Some(0.5));
        // the same pair, written as a half-turn
        let half_turn = Matrix::rotation2(std::f64::consts::PI);
        assert!(segment_exits_glnplus(&i, &half_turn));
    }

    #[test]
    fn spd_segment_stays_inside() {
        let i = Matrix::identity(2);
        assert!(!segment_exits_glnplus(&i, &Matrix::from_diag(&[2.0, 3.0])));
    }

    #[test]
    fn segment_crossing_negative_determinant() {
        // det = (1 − 2t)(1 − 3t) < 0 on (1/3, 1/2)
        let t = segment_exit_point(&Matrix::identity(2), &Matrix::from_diag(&[-1.0, -2.0])).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-12, "{t}");
    }

    #[test]
    fn tangency_between_samples_is_found() {
        // det = (1 − 3t)², zero only at t = 1/3, which is off the sample grid
        let a = Matrix::identity(2);
        let b = Matrix::from_diag(&[-2.0, -2.0]);
        assert!(segment_exits_glnplus(&a, &b));
    }
}
