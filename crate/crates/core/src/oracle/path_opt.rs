//! Discrete path-energy minimization for intrinsic distances.
//!
//! A path is a polygon x₀, …, x_K in GL(n)⁺. Its discrete energy
//! E = K Σ_k g_{m_k}(Δ_k, Δ_k), with Δ_k = x_{k+1} − x_k and m_k the chord
//! midpoint, is minimized by gradient descent with finite-difference
//! gradients. Minimizers of E are the constant-speed minimizers of the
//! length, which is what gets reported. The far endpoint may be left free on
//! SO(n), parametrized as Q₀·exp(W) with W skew.

use log::warn;

use crate::error::{Error, Result};
use crate::geodesy::{segment_norm_sq, DiscretePath};
use crate::matcore::{mat_exp, polar, spd_log, Matrix};
use crate::metric::MetricKind;
use crate::oracle::witness::segment_stays_positive;

const STRAIGHT_INIT_MIN_DET: f64 = 1e-6;
const FEASIBILITY_SAMPLES: usize = 8;
const ARMIJO_C: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;
const PATIENCE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct PathOptimizerConfig {
    /// Number of segments K.
    pub nodes: usize,
    pub max_iters: usize,
    /// Initial step length of the descent.
    pub step_size: f64,
    /// Relative length change below which the run counts as converged.
    pub tol: f64,
    /// Let the far endpoint move on SO(n).
    pub endpoint_free: bool,
}

impl Default for PathOptimizerConfig {
    fn default() -> Self {
        PathOptimizerConfig {
            nodes: 32,
            max_iters: 20_000,
            step_size: 1e-2,
            tol: 1e-10,
            endpoint_free: true,
        }
    }
}

impl PathOptimizerConfig {
    pub fn with_nodes(nodes: usize) -> Self {
        PathOptimizerConfig {
            nodes,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 4 {
            return Err(Error::InvalidArgument("path needs at least 4 segments".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be positive".into()));
        }
        if !(self.step_size > 0.0 && self.tol > 0.0) {
            return Err(Error::InvalidArgument(
                "step_size and tol must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Result of a path optimization.
#[derive(Debug, Clone)]
pub struct PathOptimum {
    /// Length of the final path.
    pub value: f64,
    pub path: DiscretePath,
    /// False when `max_iters` ran out before the length settled; the path is
    /// then the best found.
    pub converged: bool,
    pub iterations: usize,
}

/// Intrinsic distance from A to SO(n) under `kind`, by path relaxation.
///
/// Starts from the straight segment between A and its polar factor, or from
/// the closed-form geodesic O·exp((1−t) log P) when a chord midpoint of the
/// straight segment has determinant below 1e-6.
pub fn intrinsic_distance_to_son(
    a: &Matrix,
    kind: MetricKind,
    cfg: &PathOptimizerConfig,
) -> Result<PathOptimum> {
    cfg.validate()?;
    let pd = polar(a)?;
    let k = cfg.nodes;
    let straight: Vec<Matrix> = (0..=k)
        .map(|i| a.add_scaled(i as f64 / k as f64, &(&pd.rotation - a)))
        .collect();
    let degenerate = straight
        .windows(2)
        .any(|w| (&w[0] + &w[1]).scale(0.5).det() < STRAIGHT_INIT_MIN_DET);
    let nodes = if degenerate {
        let log_p = spd_log(&pd.stretch)?;
        (0..=k)
            .map(|i| {
                let t = i as f64 / k as f64;
                pd.rotation.matmul(&mat_exp(&log_p.scale(1.0 - t)))
            })
            .collect()
    } else {
        straight
    };
    let end = if cfg.endpoint_free {
        FarEnd::OnRotations(pd.rotation)
    } else {
        FarEnd::Fixed
    };
    Optimizer::new(nodes, kind, end)?.run(cfg)
}

/// Like [`intrinsic_distance_to_son`], but the free endpoint starts at
/// `start_rotation` instead of the polar factor, from a straight segment.
pub fn intrinsic_distance_from(
    a: &Matrix,
    start_rotation: &Matrix,
    kind: MetricKind,
    cfg: &PathOptimizerConfig,
) -> Result<PathOptimum> {
    cfg.validate()?;
    a.check_same_dim(start_rotation)?;
    let k = cfg.nodes;
    let nodes: Vec<Matrix> = (0..=k)
        .map(|i| a.add_scaled(i as f64 / k as f64, &(start_rotation - a)))
        .collect();
    if nodes
        .windows(2)
        .any(|w| (&w[0] + &w[1]).scale(0.5).det() < STRAIGHT_INIT_MIN_DET)
    {
        return Err(Error::InvalidArgument(
            "straight segment to the start rotation is degenerate".into(),
        ));
    }
    Optimizer::new(nodes, kind, FarEnd::OnRotations(start_rotation.clone()))?.run(cfg)
}

/// Shortens `path` with both endpoints held fixed. `cfg.nodes` and
/// `cfg.endpoint_free` are ignored; the path keeps its own node count.
pub fn relax_path(path: DiscretePath, cfg: &PathOptimizerConfig) -> Result<PathOptimum> {
    let kind = *path.metric();
    let cfg = PathOptimizerConfig {
        nodes: path.segments().max(4),
        ..cfg.clone()
    };
    cfg.validate()?;
    Optimizer::new(path.into_nodes(), kind, FarEnd::Fixed)?.run(&cfg)
}

enum FarEnd {
    Fixed,
    /// Endpoint Q₀·exp(W) with W skew.
    OnRotations(Matrix),
}

struct Optimizer {
    nodes: Vec<Matrix>,
    kind: MetricKind,
    end: FarEnd,
    /// Skew coordinates of the free endpoint, upper-triangle order.
    w: Vec<f64>,
}

impl Optimizer {
    fn new(nodes: Vec<Matrix>, kind: MetricKind, end: FarEnd) -> Result<Self> {
        // validates dimensions and det > 0
        let nodes = DiscretePath::new(nodes, kind)?.into_nodes();
        let n = nodes[0].n();
        let w = match end {
            FarEnd::Fixed => Vec::new(),
            FarEnd::OnRotations(_) => vec![0.0; n * (n - 1) / 2],
        };
        Ok(Optimizer {
            nodes,
            kind,
            end,
            w,
        })
    }

    fn n(&self) -> usize {
        self.nodes[0].n()
    }

    fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    fn interior_len(&self) -> usize {
        (self.segments() - 1) * self.n() * self.n()
    }

    fn params(&self) -> Vec<f64> {
        let k = self.segments();
        let mut p = Vec::with_capacity(self.interior_len() + self.w.len());
        for node in &self.nodes[1..k] {
            p.extend_from_slice(node.as_slice());
        }
        p.extend_from_slice(&self.w);
        p
    }

    fn endpoint(&self, w: &[f64]) -> Option<Matrix> {
        match &self.end {
            FarEnd::Fixed => None,
            FarEnd::OnRotations(q0) => {
                let n = self.n();
                let mut skew = Matrix::zeros(n);
                let mut idx = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        skew[(i, j)] = w[idx];
                        skew[(j, i)] = -w[idx];
                        idx += 1;
                    }
                }
                Some(q0.matmul(&mat_exp(&skew)))
            }
        }
    }

    /// Nodes for a parameter vector; None if a node leaves GL(n)⁺.
    fn nodes_from(&self, p: &[f64]) -> Option<Vec<Matrix>> {
        let n = self.n();
        let k = self.segments();
        let mut nodes = Vec::with_capacity(k + 1);
        nodes.push(self.nodes[0].clone());
        for i in 0..(k - 1) {
            let m = Matrix::from_row_major(n, p[i * n * n..(i + 1) * n * n].to_vec()).ok()?;
            if !(m.det() > 0.0) {
                return None;
            }
            nodes.push(m);
        }
        let last = match self.endpoint(&p[self.interior_len()..]) {
            Some(e) => e,
            None => self.nodes[k].clone(),
        };
        nodes.push(last);
        Some(nodes)
    }

    fn segment_term(&self, a: &Matrix, b: &Matrix) -> Option<f64> {
        segment_norm_sq(&self.kind, a, b, 0).ok().filter(|v| v.is_finite())
    }

    /// Per-segment squared lengths, or None if the polygon is infeasible.
    fn segment_terms(&self, nodes: &[Matrix]) -> Option<Vec<f64>> {
        nodes
            .windows(2)
            .map(|w| {
                if !segment_stays_positive(&w[0], &w[1], FEASIBILITY_SAMPLES) {
                    return None;
                }
                self.segment_term(&w[0], &w[1])
            })
            .collect()
    }

    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let n = self.n();
        let nn = n * n;
        let k = self.segments();
        let scale = k as f64;
        let mut grad = vec![0.0; p.len()];

        for node_idx in 1..k {
            let node = &self.nodes[node_idx];
            let prev = &self.nodes[node_idx - 1];
            let next = &self.nodes[node_idx + 1];
            let h = 1e-6 * (1.0 + node.frobenius_norm());
            for e in 0..nn {
                let mut plus = node.clone();
                let mut minus = node.clone();
                let (i, j) = (e / n, e % n);
                plus[(i, j)] += h;
                minus[(i, j)] -= h;
                let local = |x: &Matrix| -> Option<f64> {
                    Some(self.segment_term(prev, x)? + self.segment_term(x, next)?)
                };
                if let (Some(fp), Some(fm)) = (local(&plus), local(&minus)) {
                    grad[(node_idx - 1) * nn + e] = scale * (fp - fm) / (2.0 * h);
                }
            }
        }

        if !self.w.is_empty() {
            let prev = &self.nodes[k - 1];
            let offset = self.interior_len();
            let h = 1e-6 * (1.0 + self.w.iter().map(|x| x * x).sum::<f64>().sqrt());
            for idx in 0..self.w.len() {
                let mut wp = self.w.clone();
                let mut wm = self.w.clone();
                wp[idx] += h;
                wm[idx] -= h;
                let ep = self.endpoint(&wp).expect("free endpoint");
                let em = self.endpoint(&wm).expect("free endpoint");
                if let (Some(fp), Some(fm)) = (self.segment_term(prev, &ep), self.segment_term(prev, &em)) {
                    grad[offset + idx] = scale * (fp - fm) / (2.0 * h);
                }
            }
        }
        grad
    }

    fn set_params(&mut self, p: &[f64], nodes: Vec<Matrix>) {
        self.nodes = nodes;
        let off = self.interior_len();
        self.w.copy_from_slice(&p[off..]);
    }

    fn run(mut self, cfg: &PathOptimizerConfig) -> Result<PathOptimum> {
        let k = self.segments() as f64;
        let mut p = self.params();
        let mut terms = self
            .segment_terms(&self.nodes)
            .ok_or_else(|| Error::InvalidArgument("initial path is infeasible".into()))?;
        let mut energy = k * terms.iter().sum::<f64>();
        let mut length: f64 = terms.iter().map(|t| t.sqrt()).sum();

        let mut step = cfg.step_size;
        let mut grad = self.gradient(&p);
        let mut quiet = 0;
        let mut converged = false;
        let mut iterations = 0;

        while iterations < cfg.max_iters {
            iterations += 1;
            let g2: f64 = grad.iter().map(|g| g * g).sum();
            if energy <= 1e-300 || g2 == 0.0 {
                converged = true;
                break;
            }

            let mut accepted = None;
            let mut trial_step = step;
            for _ in 0..MAX_HALVINGS {
                let trial: Vec<f64> = p.iter().zip(&grad).map(|(x, g)| x - trial_step * g).collect();
                if let Some(nodes) = self.nodes_from(&trial) {
                    if let Some(t_terms) = self.segment_terms(&nodes) {
                        let t_energy = k * t_terms.iter().sum::<f64>();
                        if t_energy <= energy - ARMIJO_C * trial_step * g2 {
                            accepted = Some((trial, nodes, t_terms, t_energy));
                            break;
                        }
                    }
                }
                trial_step *= 0.5;
            }
            let Some((trial, nodes, t_terms, t_energy)) = accepted else {
                // no descent possible at any step: stationary to working precision
                converged = true;
                break;
            };

            self.set_params(&trial, nodes);
            let new_grad = self.gradient(&trial);

            // Barzilai–Borwein step for the next iteration
            let mut sy = 0.0;
            let mut ss = 0.0;
            for i in 0..trial.len() {
                let s = trial[i] - p[i];
                sy += s * (new_grad[i] - grad[i]);
                ss += s * s;
            }
            step = if sy > 0.0 { (ss / sy).clamp(1e-12, 1e6) } else { trial_step * 2.0 };

            let new_length: f64 = t_terms.iter().map(|t| t.sqrt()).sum();
            let rel = (length - new_length).abs() / length.max(1e-300);
            p = trial;
            grad = new_grad;
            terms = t_terms;
            energy = t_energy;
            length = new_length;

            if rel < cfg.tol {
                quiet += 1;
                if quiet >= PATIENCE {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        let _ = terms;

        if !converged {
            warn!(
                "path optimizer stopped after {iterations} iterations without converging (length {length})"
            );
        }
        let path = DiscretePath::new(self.nodes, self.kind)?;
        let value = path.length()?;
        Ok(PathOptimum {
            value,
            path,
            converged,
            iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::IsotropicMetric;
    use crate::strain::{euclidean_strain_ext, geodesic_strain};
    use std::f64::consts::{LN_2, SQRT_2};

    #[test]
    fn euclidean_diagonal() {
        let a = Matrix::from_diag(&[2.0, 0.5]);
        let r = intrinsic_distance_to_son(&a, MetricKind::EuclideanFrobenius, &PathOptimizerConfig::with_nodes(16))
            .unwrap();
        let expected = 5f64.sqrt() / 2.0;
        assert!((r.value - expected).abs() < 0.005 * expected, "{}", r.value);
        assert!(r.converged);
    }

    #[test]
    fn left_invariant_diagonal() {
        let a = Matrix::from_diag(&[2.0, 0.5]);
        let m = IsotropicMetric::new(0.0, 1.0, -1.0).unwrap();
        let r = intrinsic_distance_to_son(&a, MetricKind::LeftInvariant(m), &PathOptimizerConfig::with_nodes(32))
            .unwrap();
        let expected = SQRT_2 * LN_2;
        assert!((r.value - expected).abs() < 0.01 * expected, "{}", r.value);
    }

    #[test]
    fn rotation_input_gives_zero() {
        let q = Matrix::rotation2(0.4);
        let m = IsotropicMetric::new(0.0, 1.0, -1.0).unwrap();
        let r = intrinsic_distance_to_son(&q, MetricKind::LeftInvariant(m), &PathOptimizerConfig::default())
            .unwrap();
        assert!(r.value < 1e-12, "{}", r.value);
    }

    #[test]
    fn free_endpoint_finds_polar_factor_from_identity() {
        let a = Matrix::rotation2(0.5).matmul(&Matrix::from_diag(&[1.8, 0.7]));
        let r = intrinsic_distance_from(
            &a,
            &Matrix::identity(2),
            MetricKind::EuclideanFrobenius,
            &PathOptimizerConfig::with_nodes(8),
        )
        .unwrap();
        let expected = euclidean_strain_ext(&a).unwrap();
        assert!((r.value - expected.value).abs() < 1e-3 * expected.value, "{}", r.value);
        let end = r.path.nodes().last().unwrap();
        assert!((end - &expected.minimizer).max_abs() < 1e-2, "{end:?}");
    }

    #[test]
    fn fixed_endpoint_mode() {
        let a = Matrix::from_diag(&[3.0, 1.0]);
        let m = IsotropicMetric::new(0.5, 1.0, -1.0).unwrap();
        let cfg = PathOptimizerConfig {
            endpoint_free: false,
            ..PathOptimizerConfig::with_nodes(16)
        };
        let r = intrinsic_distance_to_son(&a, MetricKind::LeftInvariant(m), &cfg).unwrap();
        let expected = geodesic_strain(&m, &a).unwrap().value;
        assert!((r.value - expected).abs() < 0.01 * expected);
        assert_eq!(r.path.nodes().last().unwrap(), &Matrix::identity(2));
    }

    #[test]
    fn config_validation() {
        let a = Matrix::identity(2);
        let cfg = PathOptimizerConfig::with_nodes(3);
        assert!(intrinsic_distance_to_son(&a, MetricKind::EuclideanFrobenius, &cfg).is_err());
        let cfg = PathOptimizerConfig {
            tol: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
