//! Geodesics of the left-invariant metrics and discrete path lengths.
//!
//! Velocities are given in body coordinates: a geodesic starting at A with
//! "velocity X₀" has actual initial velocity γ̇(0) = A·X₀. In closed form
//!
//! ```text
//! γ(t) = A · exp((1−κ) t X₀ + κ t X₀ᵀ) · exp(κ t (X₀ − X₀ᵀ))
//! ```
//!
//! and the body velocity X(t) = γ(t)⁻¹γ̇(t) obeys Ẋ = κ (XᵀX − XXᵀ).

use crate::error::{Error, Result};
use crate::matcore::{mat_exp, Matrix};
use crate::metric::{IsotropicMetric, MetricKind};

/// Initial data for a geodesic of a left-invariant isotropic metric.
#[derive(Debug, Clone)]
pub struct GeodesicSpec {
    start: Matrix,
    velocity: Matrix,
    metric: IsotropicMetric,
}

impl GeodesicSpec {
    /// `velocity` is X₀ in body coordinates; `start` must have det > 0.
    pub fn new(start: Matrix, velocity: Matrix, metric: IsotropicMetric) -> Result<Self> {
        start.check_same_dim(&velocity)?;
        metric.check_dimension(start.n())?;
        let det = start.det();
        if det <= 0.0 {
            return Err(Error::NegativeDeterminant(det));
        }
        start.inverse()?;
        Ok(GeodesicSpec {
            start,
            velocity,
            metric,
        })
    }

    pub fn start(&self) -> &Matrix {
        &self.start
    }

    pub fn velocity(&self) -> &Matrix {
        &self.velocity
    }

    pub fn metric(&self) -> &IsotropicMetric {
        &self.metric
    }

    /// γ(t) from the closed form.
    pub fn eval(&self, t: f64) -> Matrix {
        let k = self.metric.kappa();
        let x0 = &self.velocity;
        let x0t = x0.transpose();
        let first = x0.scale((1.0 - k) * t).add_scaled(k * t, &x0t);
        let second = (x0 - &x0t).scale(k * t);
        let from_identity = mat_exp(&first).matmul(&mat_exp(&second));
        self.start.matmul(&from_identity)
    }

    /// γ(t_end) by classical RK4 on the coupled system γ̇ = γX,
    /// Ẋ = κ(XᵀX − XXᵀ), with `steps` fixed steps.
    pub fn integrate(&self, t_end: f64, steps: usize) -> Result<Matrix> {
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be >= 1".into()));
        }
        let h = t_end / steps as f64;
        let m = &self.metric;
        let rhs = |g: &Matrix, x: &Matrix| (g.matmul(x), geodesic_ode_rhs(m, x));

        let mut g = self.start.clone();
        let mut x = self.velocity.clone();
        for _ in 0..steps {
            let (kg1, kx1) = rhs(&g, &x);
            let (kg2, kx2) = rhs(&g.add_scaled(0.5 * h, &kg1), &x.add_scaled(0.5 * h, &kx1));
            let (kg3, kx3) = rhs(&g.add_scaled(0.5 * h, &kg2), &x.add_scaled(0.5 * h, &kx2));
            let (kg4, kx4) = rhs(&g.add_scaled(h, &kg3), &x.add_scaled(h, &kx3));
            let dg = kg1.add_scaled(2.0, &kg2).add_scaled(2.0, &kg3).add_scaled(1.0, &kg4);
            let dx = kx1.add_scaled(2.0, &kx2).add_scaled(2.0, &kx3).add_scaled(1.0, &kx4);
            g = g.add_scaled(h / 6.0, &dg);
            x = x.add_scaled(h / 6.0, &dx);
        }
        Ok(g)
    }

    /// Samples γ at K+1 equally spaced times in [0, t_end].
    pub fn sample(&self, t_end: f64, segments: usize) -> Vec<Matrix> {
        (0..=segments)
            .map(|k| self.eval(t_end * k as f64 / segments as f64))
            .collect()
    }
}

/// κ (XᵀX − XXᵀ), the body-velocity equation of a geodesic.
pub fn geodesic_ode_rhs(m: &IsotropicMetric, x: &Matrix) -> Matrix {
    let xt = x.transpose();
    (&xt.matmul(x) - &x.matmul(&xt)).scale(m.kappa())
}

/// Closed-form solution X(t) = exp(κt(X₀ᵀ − X₀)) X₀ exp(κt(X₀ − X₀ᵀ)).
pub fn ode_solution(m: &IsotropicMetric, x0: &Matrix, t: f64) -> Matrix {
    let w = (x0 - &x0.transpose()).scale(m.kappa() * t);
    mat_exp(&-&w).matmul(x0).matmul(&mat_exp(&w))
}

const MIDPOINT_DET_FLOOR: f64 = 1e-10;

/// A polygonal path in GL(n)⁺ together with the metric used to measure it.
#[derive(Debug, Clone)]
pub struct DiscretePath {
    nodes: Vec<Matrix>,
    metric: MetricKind,
}

impl DiscretePath {
    /// Needs at least two nodes, all of the same dimension with det > 0.
    pub fn new(nodes: Vec<Matrix>, metric: MetricKind) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidArgument(
                "a path needs at least two nodes".into(),
            ));
        }
        let n = nodes[0].n();
        if let Some(m) = metric.isotropic() {
            m.check_dimension(n)?;
        }
        for node in &nodes {
            if node.n() != n {
                return Err(Error::DimensionMismatch(n, node.n()));
            }
            let det = node.det();
            if !(det > 0.0) {
                return Err(Error::NegativeDeterminant(det));
            }
        }
        Ok(DiscretePath { nodes, metric })
    }

    pub fn nodes(&self) -> &[Matrix] {
        &self.nodes
    }

    pub fn metric(&self) -> &MetricKind {
        &self.metric
    }

    /// Number of segments K.
    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn into_nodes(self) -> Vec<Matrix> {
        self.nodes
    }

    /// Lengths of the individual chords, each measured at its midpoint.
    pub fn segment_lengths(&self) -> Result<Vec<f64>> {
        self.nodes
            .windows(2)
            .enumerate()
            .map(|(k, w)| segment_length(&self.metric, &w[0], &w[1], k))
            .collect()
    }

    /// Σ √g_M(Δ, Δ) over the chords Δ = x_{k+1} − x_k, with the chord midpoint
    /// M as base point. Second-order accurate in the mesh size.
    pub fn length(&self) -> Result<f64> {
        Ok(self.segment_lengths()?.iter().sum())
    }
}

/// Squared metric length of the chord a → b measured at its midpoint.
pub(crate) fn segment_norm_sq(metric: &MetricKind, a: &Matrix, b: &Matrix, k: usize) -> Result<f64> {
    let delta = b - a;
    let mid = (a + b).scale(0.5);
    let det = mid.det();
    if !(det.abs() >= MIDPOINT_DET_FLOOR) {
        return Err(Error::MidpointSingular { segment: k, det });
    }
    if metric.depends_on_base_point() {
        let inv = mid.inverse().map_err(|_| Error::MidpointSingular { segment: k, det })?;
        Ok(metric.inner_with_inverse(&inv, &delta, &delta))
    } else {
        Ok(delta.frobenius_ip(&delta))
    }
}

fn segment_length(metric: &MetricKind, a: &Matrix, b: &Matrix, k: usize) -> Result<f64> {
    Ok(segment_norm_sq(metric, a, b, k)?.max(0.0).sqrt())
}
