//! Isotropic inner products on the Lie algebra of GL(n) and the Riemannian
//! metrics built from them.
//!
//! At the identity the metric is
//!
//! ```text
//! g_I(X, Y) = α tr(X) tr(Y) + β tr(sym X · sym Y) + γ tr(skew X · skew Y)
//! ```
//!
//! with sym X = (X + Xᵀ)/2 and skew X = (X − Xᵀ)/2. Left translation carries
//! it to every point: g_B(X, Y) = g_I(B⁻¹X, B⁻¹Y). This family is exactly the
//! set of left-GL(n)-invariant, right-O(n)-invariant metrics.
//!
//! Note that tr(W²) ≤ 0 for skew W, so γ < 0 makes the skew block positive.
//!
//! Only the isotropic family is exposed. Inner products invariant under
//! conjugation by SO(n) alone coincide with it except possibly when n = 4,
//! and that case is not covered here.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::random::{gaussian_matrix, random_orthogonal};

/// Parameters (α, β, γ) of an isotropic inner product, with the derived
/// twist constant κ = (β − γ)/(2β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicMetric {
    alpha: f64,
    beta: f64,
    gamma: f64,
    kappa: f64,
}

impl IsotropicMetric {
    /// Requires α ≥ 0, β > 0 and γ < 0, all finite.
    ///
    /// The boundary cases β = 0 or γ = 0 are rejected: the form is degenerate
    /// there and κ is undefined for β = 0.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidMetric("parameters must be finite".into()));
        }
        if alpha < 0.0 {
            return Err(Error::InvalidMetric(format!("alpha = {alpha} must be >= 0")));
        }
        if beta <= 0.0 {
            return Err(Error::InvalidMetric(format!("beta = {beta} must be > 0")));
        }
        if gamma >= 0.0 {
            return Err(Error::InvalidMetric(format!("gamma = {gamma} must be < 0")));
        }
        Ok(IsotropicMetric {
            alpha,
            beta,
            gamma,
            kappa: (beta - gamma) / (2.0 * beta),
        })
    }

    /// Positive-definiteness in dimension n: n·α + β > 0.
    ///
    /// Always satisfied under the constructor's constraints; kept so that the
    /// dimension-dependent condition is checked where a dimension is known.
    pub fn check_dimension(&self, n: usize) -> Result<()> {
        if n as f64 * self.alpha + self.beta > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidMetric(format!(
                "n*alpha + beta must be positive for n = {n}"
            )))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// g_I(X, Y).
    pub fn inner(&self, x: &Matrix, y: &Matrix) -> Result<f64> {
        x.check_same_dim(y)?;
        Ok(self.inner_unchecked(x, y))
    }

    pub(crate) fn inner_unchecked(&self, x: &Matrix, y: &Matrix) -> f64 {
        let n = x.n();
        let mut sym = 0.0;
        let mut skew = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (xij, xji) = (x[(i, j)], x[(j, i)]);
                let (yij, yji) = (y[(i, j)], y[(j, i)]);
                // tr(AB) = Σ a_ij b_ji; sym parts are symmetric, skew parts antisymmetric
                sym += (xij + xji) * (yij + yji);
                skew -= (xij - xji) * (yij - yji);
            }
        }
        self.alpha * x.trace() * y.trace() + 0.25 * (self.beta * sym + self.gamma * skew)
    }

    /// ‖X‖ under g_I.
    pub fn norm(&self, x: &Matrix) -> f64 {
        self.inner_unchecked(x, x).max(0.0).sqrt()
    }

    /// True iff `trials` random (X, Y, U) with U orthogonal all satisfy
    /// g_I(X, Y) = g_I(UᵀXU, UᵀYU) to 1e-10 relative. U alternates between
    /// determinant +1 and −1.
    pub fn check_isotropy<R: Rng + ?Sized>(&self, n: usize, trials: usize, rng: &mut R) -> bool {
        check_isotropy_of(|x, y| self.inner_unchecked(x, y), n, trials, rng)
    }
}

/// Relative violation of conjugation invariance of a bilinear form for one
/// triple (X, Y, U).
pub fn isotropy_defect<F>(form: F, x: &Matrix, y: &Matrix, u: &Matrix) -> f64
where
    F: Fn(&Matrix, &Matrix) -> f64,
{
    let ut = u.transpose();
    let before = form(x, y);
    let after = form(&ut.matmul(x).matmul(u), &ut.matmul(y).matmul(u));
    (before - after).abs() / (1.0 + before.abs())
}

/// Randomized isotropy test for an arbitrary bilinear form.
pub fn check_isotropy_of<F, R>(form: F, n: usize, trials: usize, rng: &mut R) -> bool
where
    F: Fn(&Matrix, &Matrix) -> f64,
    R: Rng + ?Sized,
{
    (0..trials).all(|t| {
        let x = gaussian_matrix(n, rng);
        let y = gaussian_matrix(n, rng);
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        let u = random_orthogonal(n, sign, rng);
        isotropy_defect(&form, &x, &y, &u) <= 1e-10
    })
}

/// A Riemannian metric on GL(n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricKind {
    /// Left translation of an isotropic inner product.
    LeftInvariant(IsotropicMetric),
    /// The flat metric tr(XᵀY) of the ambient matrix space.
    EuclideanFrobenius,
    /// g + i*g, where i is matrix inversion: inverse-invariant.
    SymmetrizedLeftInvariant(IsotropicMetric),
}

impl MetricKind {
    /// g_B(X, Y).
    ///
    /// The pullback under inversion is (i*g)_B(X, Y) = g_I(X B⁻¹, Y B⁻¹).
    pub fn inner_at(&self, b: &Matrix, x: &Matrix, y: &Matrix) -> Result<f64> {
        b.check_same_dim(x)?;
        b.check_same_dim(y)?;
        match self {
            MetricKind::EuclideanFrobenius => Ok(x.frobenius_ip(y)),
            _ => {
                let b_inv = b.inverse()?;
                Ok(self.inner_with_inverse(&b_inv, x, y))
            }
        }
    }

    /// g_B(X, Y) given B⁻¹ directly.
    pub(crate) fn inner_with_inverse(&self, b_inv: &Matrix, x: &Matrix, y: &Matrix) -> f64 {
        match self {
            MetricKind::EuclideanFrobenius => x.frobenius_ip(y),
            MetricKind::LeftInvariant(m) => {
                m.inner_unchecked(&b_inv.matmul(x), &b_inv.matmul(y))
            }
            MetricKind::SymmetrizedLeftInvariant(m) => {
                m.inner_unchecked(&b_inv.matmul(x), &b_inv.matmul(y))
                    + m.inner_unchecked(&x.matmul(b_inv), &y.matmul(b_inv))
            }
        }
    }

    /// g_B(X, X).
    pub fn norm_sq_at(&self, b: &Matrix, x: &Matrix) -> Result<f64> {
        self.inner_at(b, x, x)
    }

    /// Whether evaluating the metric needs B⁻¹.
    pub fn depends_on_base_point(&self) -> bool {
        !matches!(self, MetricKind::EuclideanFrobenius)
    }

    pub fn isotropic(&self) -> Option<&IsotropicMetric> {
        match self {
            MetricKind::LeftInvariant(m) | MetricKind::SymmetrizedLeftInvariant(m) => Some(m),
            MetricKind::EuclideanFrobenius => None,
        }
    }
}
