use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matcore::{mat_exp, Matrix};
use crate::random::{random_rotation, seeded, SeededRng};

/// How a [`RotationSampler`] covers SO(n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplingScheme {
    /// `samples` Haar-random rotations, any n.
    UniformRandom { samples: usize },
    /// Every planar rotation R(kh) with |kh| ≤ π; n = 2 only. Includes θ = 0.
    GridAngle { step: f64 },
    /// Rotation vectors on a cubic grid with `resolution` points per axis over
    /// [−π, π]³, kept inside the ball of radius π; n = 3 only.
    AxisAngleGrid { resolution: usize },
}

#[derive(Debug, Clone)]
pub struct RotationSampler {
    n: usize,
    seed: u64,
    scheme: SamplingScheme,
}

impl RotationSampler {
    pub fn new(n: usize, seed: u64, scheme: SamplingScheme) -> Result<Self> {
        match scheme {
            SamplingScheme::UniformRandom { .. } if n >= 1 => {}
            SamplingScheme::GridAngle { step } => {
                if n != 2 {
                    return Err(Error::UnsupportedDimension(n));
                }
                if !(step > 0.0 && step.is_finite()) {
                    return Err(Error::InvalidArgument("grid step must be positive".into()));
                }
            }
            SamplingScheme::AxisAngleGrid { resolution } => {
                if n != 3 {
                    return Err(Error::UnsupportedDimension(n));
                }
                if resolution < 2 {
                    return Err(Error::InvalidArgument("resolution must be >= 2".into()));
                }
            }
            _ => return Err(Error::UnsupportedDimension(n)),
        }
        Ok(RotationSampler { n, seed, scheme })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn iter(&self) -> RotationIter {
        RotationIter {
            n: self.n,
            scheme: self.scheme,
            rng: seeded(self.seed),
            index: 0,
        }
    }
}

impl IntoIterator for &RotationSampler {
    type Item = Matrix;
    type IntoIter = RotationIter;

    fn into_iter(self) -> RotationIter {
        self.iter()
    }
}

/// Stateful stream of rotations; owns its RNG.
pub struct RotationIter {
    n: usize,
    scheme: SamplingScheme,
    rng: SeededRng,
    index: usize,
}

impl Iterator for RotationIter {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        match self.scheme {
            SamplingScheme::UniformRandom { samples } => {
                if self.index >= samples {
                    return None;
                }
                self.index += 1;
                Some(random_rotation(self.n, &mut self.rng))
            }
            SamplingScheme::GridAngle { step } => {
                let half = (PI / step).floor() as i64;
                let k = -half + self.index as i64;
                if k > half {
                    return None;
                }
                self.index += 1;
                Some(Matrix::rotation2(k as f64 * step))
            }
            SamplingScheme::AxisAngleGrid { resolution } => {
                let spacing = 2.0 * PI / (resolution - 1) as f64;
                let total = resolution.pow(3);
                while self.index < total {
                    let i = self.index;
                    self.index += 1;
                    let w = [
                        -PI + spacing * (i % resolution) as f64,
                        -PI + spacing * ((i / resolution) % resolution) as f64,
                        -PI + spacing * (i / (resolution * resolution)) as f64,
                    ];
                    if w.iter().map(|c| c * c).sum::<f64>() > PI * PI * (1.0 + 1e-12) {
                        continue;
                    }
                    let skew = Matrix::from_rows(&[
                        [0.0, -w[2], w[1]],
                        [w[2], 0.0, -w[0]],
                        [-w[1], w[0], 0.0],
                    ])
                    .expect("finite");
                    return Some(mat_exp(&skew));
                }
                None
            }
        }
    }
}
