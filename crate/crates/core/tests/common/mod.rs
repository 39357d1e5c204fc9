//! Finite-difference oracle shared by the gradient and acceptance suites.

use posekit::experiment::random_rotation;
use posekit::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const H: f64 = 1e-6;

/// Central-difference gradient of `f` in each of the nine coordinates.
pub fn numeric_gradient(f: impl Fn(&PredVectors) -> f64, at: &PredVectors) -> [f64; 9] {
    let mut out = [0.0; 9];
    for (k, slot) in out.iter_mut().enumerate() {
        let (i, c) = (k / 3, k % 3);
        let mut plus = *at;
        let mut minus = *at;
        plus[i][c] += H;
        minus[i][c] -= H;
        *slot = (f(&plus) - f(&minus)) / (2.0 * H);
    }
    out
}

pub fn flatten(g: &PredVectors) -> [f64; 9] {
    let mut out = [0.0; 9];
    for (k, o) in out.iter_mut().enumerate() {
        *o = g[k / 3][k % 3];
    }
    out
}

pub fn relative_error(a: &[f64; 9], b: &[f64; 9]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(b.iter().map(|x| x * x).sum::<f64>().sqrt());
    if scale < 1e-12 {
        diff
    } else {
        diff / scale
    }
}

pub fn random_point(g: &mut ChaCha8Rng) -> (PoseVectors, PredVectors) {
    let gt = pose_vectors(&random_rotation(g));
    let pred = [0, 1, 2].map(|_| Vector3::new(g.gen_range(-1.5..1.5), g.gen_range(-1.5..1.5), g.gen_range(-1.5..1.5)));
    (gt, pred)
}

pub fn worst_gradient_errors(points: usize, seed: u64) -> [f64; 3] {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let cfg = LossConfig::new(0.3).unwrap();
    let mut worst = [0.0f64; 3];
    for _ in 0..points {
        let (gt, pred) = random_point(&mut g);
        let reg = relative_error(&flatten(&reg_loss(&gt, &pred).grad), &numeric_gradient(|p| reg_loss(&gt, p).value, &pred));
        let ortho = relative_error(&flatten(&ortho_loss(&pred).grad), &numeric_gradient(|p| ortho_loss(p).value, &pred));
        let total = relative_error(
            &flatten(&total_loss(&gt, &pred, &cfg).grad),
            &numeric_gradient(|p| total_loss(&gt, p, &cfg).value, &pred),
        );
        worst = [worst[0].max(reg), worst[1].max(ortho), worst[2].max(total)];
    }
    worst
}

