//! Synthetic representation-continuity experiment.
//!
//! Poses are rendered as orthographic projections of a fixed asymmetric
//! 3D point set. A linear regressor is trained against either the canonical
//! Euler triple (`Euler3`) or the nine rotation entries (`Matrix9`). Near
//! yaw ±90 the canonical Euler labels jump by 180 degrees between
//! near-identical feature vectors, while matrix labels stay continuous.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PoseError, Result};
use crate::linalg::{Matrix3, Vector3};
use crate::losses::{ortho_loss, total_loss, LossConfig, PredVectors};
use crate::metrics::{binned_report, frobenius_distance, mae_euler, maev, vector_angle, ErrorReport, ErrorSample};
use crate::refinement::{gram_schmidt_rotation, nearest_rotation_svd};
use crate::rotation::{euler_to_rotation, pose_vectors, quat_to_rotation, rotation_to_euler, EulerAngles, Quaternion, RotationMatrix};

/// Scale mapping degree-valued Euler targets into roughly `[-1, 1]`.
pub const EULER_TARGET_SCALE: f64 = 99.0;

/// Canonical head points in the `(left, down, front)` frame. No two are
/// mirror images and they are not coplanar, so the projection is injective
/// over the sampled pose region.
pub const CANONICAL_POINTS: [[f64; 3]; 12] = [
    [0.00, 0.05, 1.00],   // nose tip
    [0.35, -0.30, 0.62],  // left eye
    [-0.31, -0.27, 0.60], // right eye
    [0.02, 0.45, 0.72],   // mouth
    [0.52, 0.08, 0.00],   // left ear
    [-0.57, 0.03, -0.06], // right ear
    [0.06, 0.82, 0.40],   // chin
    [0.10, -0.92, 0.12],  // crown
    [-0.18, 0.30, -0.71], // nape
    [0.61, -0.52, 0.22],
    [-0.42, 0.61, 0.33],
    [0.24, 0.18, 0.86],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Euler triple uniform over `[-99, 99]³`.
    Uniform,
    /// As `Uniform`, but `|yaw|` uniform over `[yaw_focus, 99]`.
    NearProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetRepr {
    Euler3,
    Matrix9,
}

impl TargetRepr {
    pub fn outputs(self) -> usize {
        match self {
            TargetRepr::Euler3 => 3,
            TargetRepr::Matrix9 => 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    /// Lower bound on `|yaw|` for [`SampleMode::NearProfile`].
    pub yaw_focus: f64,
    pub alpha: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub n_points: usize,
    pub train_mode: SampleMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            n_train: 2000,
            n_test: 600,
            yaw_focus: 85.0,
            alpha: 0.2,
            epochs: 600,
            learning_rate: 0.1,
            n_points: CANONICAL_POINTS.len(),
            train_mode: SampleMode::Uniform,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(PoseError::InvalidArgument(msg));
        if self.n_train == 0 || self.n_test == 0 {
            return bad("sample counts must be positive".into());
        }
        if !(0.0..99.0).contains(&self.yaw_focus) {
            return bad(format!("yaw_focus must be in [0, 99), got {}", self.yaw_focus));
        }
        if self.n_points == 0 || self.n_points > CANONICAL_POINTS.len() {
            return bad(format!("n_points must be in 1..={}", CANONICAL_POINTS.len()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        LossConfig::new(self.alpha)?;
        Ok(())
    }
}

/// A drawn pose: the sampled Euler triple and the rotation it describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledPose {
    pub rotation: RotationMatrix,
    pub drawn: EulerAngles,
}

pub fn sample_rotation<R: Rng + ?Sized>(rng: &mut R, mode: SampleMode, yaw_focus: f64) -> SampledPose {
    let roll = rng.gen_range(-99.0..=99.0);
    let pitch = rng.gen_range(-99.0..=99.0);
    let yaw = match mode {
        SampleMode::Uniform => rng.gen_range(-99.0..=99.0),
        SampleMode::NearProfile => {
            let mag: f64 = rng.gen_range(yaw_focus..=99.0);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        }
    };
    let drawn = EulerAngles::new(roll, yaw, pitch);
    SampledPose {
        rotation: euler_to_rotation(&drawn).expect("finite angles"),
        drawn,
    }
}

/// Haar-uniform rotation (Shoemake's subgroup algorithm).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> RotationMatrix {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let u3: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let q = Quaternion::new(a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos());
    quat_to_rotation(&q).expect("unit quaternion")
}

/// Orthographic projection of the first `n_points` canonical points: the
/// front coordinate is dropped after rotating.
pub fn render_features(r: &RotationMatrix, n_points: usize) -> Vec<f64> {
    CANONICAL_POINTS[..n_points]
        .iter()
        .flat_map(|p| {
            let q = r.rotate(&Vector3::from_array(*p));
            [q.x, q.y]
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSample {
    pub rotation: RotationMatrix,
    /// Canonical annotation (yaw within ±90), as a dataset would store it.
    pub annotation: EulerAngles,
    pub drawn: EulerAngles,
    pub features: Vec<f64>,
}

impl SyntheticSample {
    pub fn new(pose: SampledPose, n_points: usize) -> Self {
        Self {
            annotation: rotation_to_euler(&pose.rotation).angles,
            features: render_features(&pose.rotation, n_points),
            rotation: pose.rotation,
            drawn: pose.drawn,
        }
    }
}

/// Which RNG stream a sample set is drawn from, so training and test sets
/// are independent for the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

pub fn generate_samples(cfg: &ExperimentConfig, mode: SampleMode, split: Split) -> Vec<SyntheticSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = match split {
        Split::Train => {
            rng.set_stream(1);
            cfg.n_train
        }
        Split::Test => {
            rng.set_stream(2 + mode as u64);
            cfg.n_test
        }
    };
    (0..n)
        .map(|_| SyntheticSample::new(sample_rotation(&mut rng, mode, cfg.yaw_focus), cfg.n_points))
        .collect()
}

/// Linear model `y = W · [features, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regressor {
    /// `outputs × (inputs + 1)`, bias in the last column.
    pub weights: Vec<Vec<f64>>,
    pub target: TargetRepr,
    /// Training loss evaluated at the start of each epoch.
    pub loss_history: Vec<f64>,
}

impl Regressor {
    pub fn zeros(target: TargetRepr, n_features: usize) -> Self {
        Self {
            weights: vec![vec![0.0; n_features + 1]; target.outputs()],
            target,
            loss_history: Vec::new(),
        }
    }

    pub fn raw_output(&self, features: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .map(|row| {
                let (bias, w) = row.split_last().expect("bias column");
                w.iter().zip(features).fold(*bias, |a, (w, x)| a + w * x)
            })
            .collect()
    }
}

/// What a model emits for one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    Euler(EulerAngles),
    /// Raw left / down / front columns, not yet projected onto SO(3).
    Matrix(Matrix3),
}

pub trait PosePredictor {
    fn predict(&self, sample: &SyntheticSample) -> Prediction;
}

impl PosePredictor for Regressor {
    fn predict(&self, sample: &SyntheticSample) -> Prediction {
        let out = self.raw_output(&sample.features);
        match self.target {
            TargetRepr::Euler3 => Prediction::Euler(EulerAngles::new(
                out[0] * EULER_TARGET_SCALE,
                out[1] * EULER_TARGET_SCALE,
                out[2] * EULER_TARGET_SCALE,
            )),
            TargetRepr::Matrix9 => Prediction::Matrix(Matrix3::from_columns(split_vectors(&out))),
        }
    }
}

fn split_vectors(out: &[f64]) -> PredVectors {
    [
        Vector3::new(out[0], out[1], out[2]),
        Vector3::new(out[3], out[4], out[5]),
        Vector3::new(out[6], out[7], out[8]),
    ]
}

/// Mean loss over `samples` and its gradient with respect to the weights.
fn loss_and_gradient(model: &Regressor, samples: &[SyntheticSample], cfg: &LossConfig) -> (f64, Vec<Vec<f64>>) {
    let mut grad = vec![vec![0.0; model.weights[0].len()]; model.weights.len()];
    let mut loss = 0.0;
    let mut out_grad = vec![0.0; model.target.outputs()];
    for s in samples {
        let out = model.raw_output(&s.features);
        match model.target {
            TargetRepr::Matrix9 => {
                let eval = total_loss(&pose_vectors(&s.rotation), &split_vectors(&out), cfg);
                loss += eval.value;
                for (i, g) in eval.grad.iter().enumerate() {
                    out_grad[3 * i..3 * i + 3].copy_from_slice(&g.to_array());
                }
            }
            TargetRepr::Euler3 => {
                let t = s.annotation.to_array().map(|a| a / EULER_TARGET_SCALE);
                for k in 0..3 {
                    let d = out[k] - t[k];
                    loss += d * d / 3.0;
                    out_grad[k] = 2.0 * d / 3.0;
                }
            }
        }
        for (row, &g) in grad.iter_mut().zip(&out_grad) {
            let (bias, w) = row.split_last_mut().unwrap();
            *bias += g;
            for (gw, x) in w.iter_mut().zip(&s.features) {
                *gw += g * x;
            }
        }
    }
    let n = samples.len() as f64;
    grad.iter_mut().flatten().for_each(|g| *g /= n);
    (loss / n, grad)
}

/// Mean training loss of `model` on `samples`.
pub fn training_loss(model: &Regressor, samples: &[SyntheticSample], alpha: f64) -> Result<f64> {
    Ok(loss_and_gradient(model, samples, &LossConfig::new(alpha)?).0)
}

/// Full-batch gradient descent from zero weights on an explicit sample set.
pub fn train_on(cfg: &ExperimentConfig, target: TargetRepr, samples: &[SyntheticSample]) -> Result<Regressor> {
    cfg.validate()?;
    let loss_cfg = LossConfig::new(cfg.alpha)?;
    let mut model = Regressor::zeros(target, 2 * cfg.n_points);
    for epoch in 0..cfg.epochs {
        let (loss, grad) = loss_and_gradient(&model, samples, &loss_cfg);
        if !loss.is_finite() {
            return Err(PoseError::TrainingDiverged { epoch, loss });
        }
        model.loss_history.push(loss);
        for (row, g) in model.weights.iter_mut().zip(&grad) {
            for (w, g) in row.iter_mut().zip(g) {
                *w -= cfg.learning_rate * g;
            }
        }
        if model.weights.iter().flatten().any(|w| !w.is_finite()) {
            return Err(PoseError::TrainingDiverged { epoch, loss: f64::INFINITY });
        }
    }
    Ok(model)
}

/// Trains on `cfg.n_train` samples drawn in `cfg.train_mode`.
pub fn train(cfg: &ExperimentConfig, target: TargetRepr) -> Result<Regressor> {
    cfg.validate()?;
    let samples = generate_samples(cfg, cfg.train_mode, Split::Train);
    train_on(cfg, target, &samples)
}

/// Projects a raw matrix prediction onto SO(3); falls back to Gram-Schmidt
/// and then identity for rank-deficient outputs.
pub fn refine_prediction(m: &Matrix3) -> RotationMatrix {
    nearest_rotation_svd(m)
        .map(|r| r.rotation)
        .or_else(|_| gram_schmidt_rotation(m, (0, 1)))
        .unwrap_or_else(|_| RotationMatrix::identity())
}

fn to_error_sample<P: PosePredictor + ?Sized>(model: &P, s: &SyntheticSample) -> ErrorSample {
    match model.predict(s) {
        Prediction::Euler(e) => ErrorSample {
            gt: s.rotation,
            pred: euler_to_rotation(&e).unwrap_or_else(|_| RotationMatrix::identity()),
            gt_euler: Some(s.annotation),
            pred_euler: Some(e),
        },
        Prediction::Matrix(m) => ErrorSample {
            gt: s.rotation,
            pred: refine_prediction(&m),
            gt_euler: Some(s.annotation),
            pred_euler: None,
        },
    }
}

/// MAE / MAEV report with default 33-degree bins.
pub fn evaluate<P: PosePredictor + ?Sized>(model: &P, test: &[SyntheticSample]) -> Result<ErrorReport> {
    evaluate_with_width(model, test, crate::metrics::DEFAULT_BIN_WIDTH)
}

pub fn evaluate_with_width<P: PosePredictor + ?Sized>(
    model: &P,
    test: &[SyntheticSample],
    bin_width: f64,
) -> Result<ErrorReport> {
    let samples: Vec<ErrorSample> = test.iter().map(|s| to_error_sample(model, s)).collect();
    binned_report(&samples, bin_width)
}

/// Mean MAEV of raw matrix predictions with each column only normalized
/// (no orthogonalization). `None` for Euler models or zero columns.
pub fn raw_column_maev<P: PosePredictor + ?Sized>(model: &P, test: &[SyntheticSample]) -> Option<f64> {
    let mut total = 0.0;
    for s in test {
        let Prediction::Matrix(m) = model.predict(s) else { return None };
        let mut per = 0.0;
        for i in 0..3 {
            let col = m.column(i).normalized()?;
            per += vector_angle(&s.rotation.column(i), &col).ok()?;
        }
        total += per / 3.0;
    }
    Some(total / test.len() as f64)
}

/// Mean orthogonality loss of raw matrix predictions.
pub fn mean_ortho_loss(model: &Regressor, test: &[SyntheticSample]) -> f64 {
    test.iter()
        .map(|s| ortho_loss(&split_vectors(&model.raw_output(&s.features))).value)
        .sum::<f64>()
        / test.len() as f64
}

/// Label behavior among sample pairs whose features are closer than `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscontinuityScan {
    pub close_pairs: usize,
    /// Largest per-component |Δ| between canonical Euler annotations, degrees.
    pub max_euler_jump: f64,
    /// Largest Frobenius distance between rotation-matrix labels.
    pub max_matrix_jump: f64,
}

pub fn scan_label_discontinuities(samples: &[SyntheticSample], delta: f64) -> DiscontinuityScan {
    let mut scan = DiscontinuityScan { close_pairs: 0, max_euler_jump: 0.0, max_matrix_jump: 0.0 };
    for (i, a) in samples.iter().enumerate() {
        for b in &samples[i + 1..] {
            let d2: f64 = a.features.iter().zip(&b.features).map(|(x, y)| (x - y) * (x - y)).sum();
            if d2 >= delta * delta {
                continue;
            }
            scan.close_pairs += 1;
            let e = mae_euler(&a.annotation, &b.annotation).per_angle;
            let jump = e.roll.max(e.yaw).max(e.pitch);
            scan.max_euler_jump = scan.max_euler_jump.max(jump);
            scan.max_matrix_jump = scan
                .max_matrix_jump
                .max(frobenius_distance(a.rotation.matrix(), b.rotation.matrix()));
        }
    }
    scan
}

/// Outcome of one worked-example check.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkedCheck {
    pub name: &'static str,
    pub passed: bool,
    pub expected: String,
    pub measured: Vec<(String, f64)>,
}

/// Worked-example checks under the library's Euler convention.
pub fn reproduce_worked_examples() -> Vec<WorkedCheck> {
    reproduce_worked_examples_with(euler_to_rotation)
}

/// Same checks with a caller-supplied Euler-to-matrix map, so a deliberately
/// wrong convention can be shown to fail.
pub fn reproduce_worked_examples_with<F>(to_matrix: F) -> Vec<WorkedCheck>
where
    F: Fn(&EulerAngles) -> Result<RotationMatrix>,
{
    let mut checks = Vec::with_capacity(3);

    let gt = EulerAngles::new(-80.8, -88.9, 78.0);
    let pred = EulerAngles::new(-19.9, -87.4, 8.0);
    let mae = mae_euler(&gt, &pred).mae;
    let v = match (to_matrix(&gt), to_matrix(&pred)) {
        (Ok(a), Ok(b)) => maev(&a, &b),
        _ => crate::metrics::VectorError { per_vector: [f64::NAN; 3], maev: f64::NAN },
    };
    let reference_vectors = [2.663, 1.504, 2.579];
    let passed = (mae - 44.13).abs() <= 0.01
        && (v.maev - 2.249).abs() <= 0.01
        && v.per_vector.iter().zip(reference_vectors).all(|(a, b)| (a - b).abs() <= 0.01);
    checks.push(WorkedCheck {
        name: "worked-pair",
        passed,
        expected: "mae 44.13 +- 0.01, maev 2.249 +- 0.01, vectors (2.663, 1.504, 2.579) +- 0.01".into(),
        measured: vec![
            ("mae".into(), mae),
            ("maev".into(), v.maev),
            ("left".into(), v.per_vector[0]),
            ("down".into(), v.per_vector[1]),
            ("front".into(), v.per_vector[2]),
        ],
    });

    let gt = EulerAngles::new(10.0, 89.0, 15.0);
    let pred = EulerAngles::new(-170.0, 88.0, -165.0);
    let mae = mae_euler(&gt, &pred).mae;
    let v = match (to_matrix(&gt), to_matrix(&pred)) {
        (Ok(a), Ok(b)) => maev(&a, &b).maev,
        _ => f64::NAN,
    };
    checks.push(WorkedCheck {
        name: "gimbal-pair",
        passed: (mae - 120.33).abs() <= 0.01 && v < 5.0,
        expected: "mae 120.33 +- 0.01, maev < 5".into(),
        measured: vec![("mae".into(), mae), ("maev".into(), v)],
    });

    let max_dev = chord_identity_deviation(1000, 0x5eed);
    checks.push(WorkedCheck {
        name: "frobenius-chord-identity",
        passed: max_dev < 1e-9,
        expected: "max deviation < 1e-9 over 1000 pairs".into(),
        measured: vec![("max_deviation".into(), max_dev)],
    });
    checks
}

/// Max over `pairs` random rotation pairs of
/// `| ‖A - B‖_F - sqrt(Σ (2 sin(θᵢ / 2))²) |`, θᵢ the per-column angles.
pub fn chord_identity_deviation(pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..pairs)
        .map(|_| {
            let a = random_rotation(&mut rng);
            let b = random_rotation(&mut rng);
            let chords: f64 = maev(&a, &b)
                .per_vector
                .iter()
                .map(|t| (2.0 * (t.to_radians() / 2.0).sin()).powi(2))
                .sum();
            (frobenius_distance(a.matrix(), b.matrix()) - chords.sqrt()).abs()
        })
        .fold(0.0, f64::max)
}
