//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use posekit::experiment::*;
use posekit::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion(id: u32, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let passed = out.passed && in_time;
    println!(
        "[{}] {id}. {name}: {} ({:.3} ms, limit {} ms{})",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64() * 1e3,
        limit.as_millis(),
        if in_time { "" } else { ", TOO SLOW" },
    );
    passed
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn worked_example_pair() -> Outcome {
    let gt = EulerAngles::new(-80.8, -88.9, 78.0);
    let pred = EulerAngles::new(-19.9, -87.4, 8.0);
    let mae = mae_euler(&gt, &pred).mae;
    let v = maev(&euler_to_rotation(&gt).unwrap(), &euler_to_rotation(&pred).unwrap());
    let vectors_ok = v.per_vector.iter().zip([2.663, 1.504, 2.579]).all(|(a, b)| within(*a, b, 0.01));
    Outcome {
        passed: within(mae, 44.13, 0.01) && within(v.maev, 2.249, 0.01) && vectors_ok,
        detail: format!(
            "mae {mae:.4} (want 44.13 +- 0.01), maev {:.4} (want 2.249 +- 0.01), vectors ({:.3}, {:.3}, {:.3}) (want 2.663, 1.504, 2.579 +- 0.01)",
            v.maev, v.per_vector[0], v.per_vector[1], v.per_vector[2]
        ),
    }
}

fn gimbal_pair() -> Outcome {
    let gt = EulerAngles::new(10.0, 89.0, 15.0);
    let pred = EulerAngles::new(-170.0, 88.0, -165.0);
    let mae = mae_euler(&gt, &pred).mae;
    let v = maev(&euler_to_rotation(&gt).unwrap(), &euler_to_rotation(&pred).unwrap()).maev;
    Outcome {
        passed: within(mae, 120.33, 0.01) && v < 5.0,
        detail: format!("mae {mae:.4} (want 120.33 +- 0.01), maev {v:.4} (want < 5)"),
    }
}

fn refinement_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let candidates: Vec<RotationMatrix> = (0..10_000).map(|_| random_rotation(&mut rng)).collect();
    let noise = |rng: &mut ChaCha8Rng, eps: f64| {
        let mut e = [0.0; 9];
        e.iter_mut().for_each(|x| *x = eps * rng.sample::<f64, _>(StandardNormal));
        Matrix3::from_row_major(e)
    };
    let mut beaten = 0usize;
    let mut worst_idempotence = 0.0f64;
    let mut bad_det = 0usize;
    let mut trials = 0usize;
    for k in 0..1000 {
        let eps = [0.05, 0.2, 0.5][k % 3];
        let m = *random_rotation(&mut rng).matrix() + noise(&mut rng, eps);
        let res = nearest_rotation_svd(&m).expect("full-rank noisy input");
        trials += 1;
        if candidates.iter().any(|c| frobenius_distance(&m, c.matrix()) < res.residual) {
            beaten += 1;
        }
        if (res.rotation.matrix().determinant() - 1.0).abs() > 1e-9 {
            bad_det += 1;
        }
        let again = nearest_rotation_svd(res.rotation.matrix()).unwrap();
        worst_idempotence = worst_idempotence.max(again.residual);
    }
    let flip = Matrix3::diagonal(1.0, 1.0, -1.0);
    let mut reflections_corrected = 0usize;
    for _ in 0..100 {
        let m = *random_rotation(&mut rng).matrix() * flip + noise(&mut rng, 0.05);
        let res = nearest_rotation_svd(&m).unwrap();
        if res.det_corrected && (res.rotation.matrix().determinant() - 1.0).abs() <= 1e-9 {
            reflections_corrected += 1;
        }
        if candidates.iter().any(|c| frobenius_distance(&m, c.matrix()) < res.residual) {
            beaten += 1;
        }
    }
    Outcome {
        passed: beaten == 0 && bad_det == 0 && reflections_corrected == 100 && worst_idempotence < 1e-12,
        detail: format!(
            "{trials} noisy + 100 reflections vs 10000 random rotations: {beaten} beaten, {bad_det} bad det, {reflections_corrected}/100 reflections corrected, idempotence residual {worst_idempotence:.2e}"
        ),
    }
}

fn chord_identity() -> Outcome {
    let dev = chord_identity_deviation(1000, 0xf14);
    Outcome { passed: dev < 1e-9, detail: format!("max deviation {dev:.2e} over 1000 pairs (want < 1e-9)") }
}

fn gradients() -> Outcome {
    let [reg, ortho, total] = common::worst_gradient_errors(100, 0x9bad);
    Outcome {
        passed: reg < 1e-6 && ortho < 1e-6 && total < 1e-6,
        detail: format!("worst relative error reg {reg:.2e}, ortho {ortho:.2e}, total {total:.2e} (want < 1e-6, h = 1e-6)"),
    }
}

fn soft_binning() -> Outcome {
    let mut ok = true;
    let mut worst_uniform = 0.0f64;
    let mut worst_midpoint = 0.0f64;
    for cfg in [StageConfig::non_uniform(), StageConfig::uniform()] {
        let u = soft_binning_expectation(&StageDistribution::<f64>::uniform(&cfg), &cfg).unwrap();
        worst_uniform = worst_uniform.max(u.abs());
        ok &= u.abs() < 1e-12;
        for &n in cfg.intervals() {
            let single = StageConfig::new(vec![n]).unwrap();
            for i in 0..n {
                let v = soft_binning_expectation(&StageDistribution::<f64>::one_hot(&single, &[i]), &single).unwrap();
                let midpoint = -1.0 + (2.0 * i as f64 + 1.0) / n as f64;
                worst_midpoint = worst_midpoint.max((v - midpoint).abs());
            }
        }
    }
    ok &= worst_midpoint < 1e-15;
    Outcome {
        passed: ok,
        detail: format!("uniform |E| max {worst_uniform:.1e} (want < 1e-12), one-hot midpoint error {worst_midpoint:.1e}"),
    }
}

fn continuity_experiment() -> Outcome {
    let cfg = ExperimentConfig::default();
    let train_set = generate_samples(&cfg, cfg.train_mode, Split::Train);
    let m9 = train_on(&cfg, TargetRepr::Matrix9, &train_set).unwrap();
    let e3 = train_on(&cfg, TargetRepr::Euler3, &train_set).unwrap();
    let profile = generate_samples(&cfg, SampleMode::NearProfile, Split::Test);
    let r9 = evaluate(&m9, &profile).unwrap();
    let r3 = evaluate(&e3, &profile).unwrap();
    let uniform = generate_samples(&cfg, SampleMode::Uniform, Split::Test);
    let u3 = evaluate(&e3, &uniform).unwrap();
    let outer = u3.mean_mae_where(EulerAxis::Yaw, 66.0, 99.0).unwrap_or(f64::NAN);
    let inner = u3.mean_mae_where(EulerAxis::Yaw, 0.0, 33.0).unwrap_or(f64::NAN);
    let ratio = outer / inner;
    Outcome {
        passed: r9.maev < r3.maev && ratio >= 2.0,
        detail: format!(
            "near-profile MAEV matrix9 {:.3} vs euler3 {:.3}; euler3 MAE |yaw| in [66,99] {outer:.3} / [0,33) {inner:.3} = {ratio:.2}x (want >= 2x)",
            r9.maev, r3.maev
        ),
    }
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8);
    let mut worst_euler = 0.0f64;
    let mut n = 0usize;
    let mut yaw = -89.0;
    while yaw <= 89.0 {
        let mut roll = -179.0;
        while roll <= 179.0 {
            let mut pitch = -179.0;
            while pitch <= 179.0 {
                let e = EulerAngles::new(
                    roll + rng.gen_range(-0.5..0.5),
                    (yaw + rng.gen_range(-0.5..0.5f64)).clamp(-89.0, 89.0),
                    pitch + rng.gen_range(-0.5..0.5),
                );
                let d = rotation_to_euler(&euler_to_rotation(&e).unwrap());
                for (a, b) in d.angles.to_array().iter().zip(e.to_array()) {
                    worst_euler = worst_euler.max((a - b).abs());
                }
                n += 1;
                pitch += 7.0;
            }
            roll += 7.0;
        }
        yaw += 4.0;
    }
    let mut worst_antipode = 0.0f64;
    for _ in 0..1000 {
        let q = Quaternion::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let Ok(q) = q.normalized() else { continue };
        let a = quat_to_rotation(&q).unwrap();
        let b = quat_to_rotation(&-q).unwrap();
        worst_antipode = worst_antipode.max((*a.matrix() - *b.matrix()).max_abs());
    }
    Outcome {
        passed: worst_euler < 1e-7 && worst_antipode < 1e-12,
        detail: format!(
            "euler round trip worst {worst_euler:.2e} deg over {n} grid points (want < 1e-7); antipodal worst {worst_antipode:.1e} (want < 1e-12)"
        ),
    }
}

fn main() {
    let ms = Duration::from_millis;
    let results = [
        criterion(1, "worked example pair (MAE 44.13, MAEV 2.249)", ms(1), worked_example_pair),
        criterion(2, "gimbal pair (MAE 120.33, MAEV < 5)", ms(1), gimbal_pair),
        criterion(3, "SVD refinement optimality", ms(30_000), refinement_optimality),
        criterion(4, "Frobenius / column-chord identity", ms(1_000), chord_identity),
        criterion(5, "analytic gradients vs finite differences", ms(1_000), gradients),
        criterion(6, "soft-binning expectation contract", ms(1), soft_binning),
        criterion(7, "representation-continuity experiment", ms(60_000), continuity_experiment),
        criterion(8, "round-trip and antipodal invariants", ms(5_000), round_trips),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
