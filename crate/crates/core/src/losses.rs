//! Vector-regression training objective with analytic gradients, and the
//! multi-stage soft-binning expectation.
//!
//! `mse` of a k-vector is `‖e‖² / k`, so the mse of a scalar is its square.

use crate::error::{PoseError, Result};
use crate::linalg::Vector3;
use crate::rotation::PoseVectors;
use crate::scalar::Real;

/// Raw predicted left, down and front vectors (not necessarily unit or orthogonal).
pub type PredVectors<T = f64> = [Vector3<T>; 3];

/// Loss value with its gradient with respect to each predicted vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossEval<T = f64> {
    pub value: T,
    pub grad: PredVectors<T>,
}

impl<T: Real> LossEval<T> {
    fn add_scaled(self, other: LossEval<T>, k: T) -> Self {
        let mut grad = self.grad;
        for (g, o) in grad.iter_mut().zip(other.grad) {
            *g += o * k;
        }
        LossEval { value: self.value + k * other.value, grad }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossConfig<T = f64> {
    alpha: T,
}

impl<T: Real> LossConfig<T> {
    /// `alpha` must be positive; values outside `[0.1, 0.5]` are allowed with a warning.
    pub fn new(alpha: T) -> Result<Self> {
        if !alpha.is_finite() || alpha <= T::zero() {
            return Err(PoseError::InvalidArgument(format!("orthogonality weight must be positive, got {alpha}")));
        }
        if alpha < T::lit(0.1) || alpha > T::lit(0.5) {
            log::warn!("orthogonality weight {alpha} is outside the usual [0.1, 0.5] range");
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
}

/// `Σᵢ ‖vᵢ - v̂ᵢ‖² / 3`.
pub fn reg_loss<T: Real>(gt: &PoseVectors<T>, pred: &PredVectors<T>) -> LossEval<T> {
    let third = T::lit(3.0).recip();
    let two_thirds = T::lit(2.0) * third;
    let gt = gt.to_array();
    let mut value = T::zero();
    let mut grad = [Vector3::zeros(); 3];
    for i in 0..3 {
        let diff = pred[i] - gt[i];
        value = value + diff.norm_squared() * third;
        grad[i] = diff * two_thirds;
    }
    LossEval { value, grad }
}

/// `Σ_{i≠j} (v̂ᵢ·v̂ⱼ)²` over the six ordered pairs.
pub fn ortho_loss<T: Real>(pred: &PredVectors<T>) -> LossEval<T> {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let mut value = T::zero();
    let mut grad = [Vector3::zeros(); 3];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = pred[i].dot(&pred[j]);
        value = value + two * d * d;
        grad[i] += pred[j] * (four * d);
        grad[j] += pred[i] * (four * d);
    }
    LossEval { value, grad }
}

/// `reg_loss + alpha · ortho_loss`.
pub fn total_loss<T: Real>(gt: &PoseVectors<T>, pred: &PredVectors<T>, cfg: &LossConfig<T>) -> LossEval<T> {
    reg_loss(gt, pred).add_scaled(ortho_loss(pred), cfg.alpha)
}

/// Number of equal-width intervals of `[-1, 1]` per stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageConfig {
    intervals_per_stage: Vec<usize>,
}

impl StageConfig {
    pub fn new(intervals_per_stage: Vec<usize>) -> Result<Self> {
        if intervals_per_stage.is_empty() {
            return Err(PoseError::InvalidArgument("at least one stage is required".into()));
        }
        if let Some(pos) = intervals_per_stage.iter().position(|&n| n == 0) {
            return Err(PoseError::InvalidArgument(format!("stage {pos} has zero intervals")));
        }
        Ok(Self { intervals_per_stage })
    }

    /// Coarse-to-fine `(81, 27, 9)`.
    pub fn non_uniform() -> Self {
        Self { intervals_per_stage: vec![81, 27, 9] }
    }

    /// `(9, 9, 9)`, the uniform ablation.
    pub fn uniform() -> Self {
        Self { intervals_per_stage: vec![9, 9, 9] }
    }

    pub fn intervals(&self) -> &[usize] {
        &self.intervals_per_stage
    }

    pub fn stages(&self) -> usize {
        self.intervals_per_stage.len()
    }
}

/// Midpoint of interval `i` (zero-based) when `[-1, 1]` is cut into `n` pieces.
pub fn interval_midpoint<T: Real>(i: usize, n: usize) -> T {
    let n_t = T::from_usize(n).unwrap();
    -T::one() + T::from_usize(2 * i + 1).unwrap() / n_t
}

/// One probability vector per stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageDistribution<T = f64> {
    pub stages: Vec<Vec<T>>,
}

impl<T: Real> StageDistribution<T> {
    pub fn new(stages: Vec<Vec<T>>) -> Self {
        Self { stages }
    }

    pub fn uniform(cfg: &StageConfig) -> Self {
        Self::new(
            cfg.intervals()
                .iter()
                .map(|&n| vec![T::from_usize(n).unwrap().recip(); n])
                .collect(),
        )
    }

    /// All mass on interval `hot[s]` of each stage.
    pub fn one_hot(cfg: &StageConfig, hot: &[usize]) -> Self {
        Self::new(
            cfg.intervals()
                .iter()
                .zip(hot)
                .map(|(&n, &h)| (0..n).map(|i| if i == h { T::one() } else { T::zero() }).collect())
                .collect(),
        )
    }
}

/// Mean over stages of `Σᵢ pᵢ · qᵢ`, with `qᵢ` the interval midpoints.
pub fn soft_binning_expectation<T: Real>(dist: &StageDistribution<T>, cfg: &StageConfig) -> Result<T> {
    if dist.stages.len() != cfg.stages() {
        return Err(PoseError::InvalidArgument(format!(
            "distribution has {} stages, config has {}",
            dist.stages.len(),
            cfg.stages()
        )));
    }
    let tol = T::lit(1e-6);
    let mut total = T::zero();
    for (s, (p, &n)) in dist.stages.iter().zip(cfg.intervals()).enumerate() {
        if p.len() != n {
            return Err(PoseError::InvalidArgument(format!("stage {s} has {} probabilities, expected {n}", p.len())));
        }
        if p.iter().any(|&x| !x.is_finite() || x < T::zero()) {
            return Err(PoseError::InvalidArgument(format!("stage {s} has a negative or non-finite probability")));
        }
        let mass = p.iter().fold(T::zero(), |a, &x| a + x);
        if (mass - T::one()).abs() > tol {
            return Err(PoseError::InvalidArgument(format!("stage {s} probabilities sum to {mass}")));
        }
        let expectation = p
            .iter()
            .enumerate()
            .fold(T::zero(), |a, (i, &x)| a + x * interval_midpoint::<T>(i, n));
        total = total + expectation;
    }
    Ok(total / T::from_usize(cfg.stages()).unwrap())
}
