//! Analytic loss gradients against central finite differences.

mod common;

use common::{random_point, worst_gradient_errors};
use posekit::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn gradients_match_finite_differences() {
    let worst = worst_gradient_errors(100, 2024);
    for (name, e) in ["reg", "ortho", "total"].iter().zip(worst) {
        assert!(e < 1e-6, "{name} gradient relative error {e:e}");
    }
}

#[test]
fn total_gradient_is_sum_of_parts() {
    let mut g = ChaCha8Rng::seed_from_u64(5);
    let cfg = LossConfig::new(0.25).unwrap();
    let (gt, pred) = random_point(&mut g);
    let t = total_loss(&gt, &pred, &cfg);
    let r = reg_loss(&gt, &pred);
    let o = ortho_loss(&pred);
    assert!((t.value - (r.value + 0.25 * o.value)).abs() < 1e-15);
    for i in 0..3 {
        assert!((t.grad[i] - (r.grad[i] + o.grad[i] * 0.25)).norm() < 1e-15);
    }
}
