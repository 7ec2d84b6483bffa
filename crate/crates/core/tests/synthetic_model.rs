//! Statistical behaviour of the synthetic estimator and the simulated runs.

use rotaug_core::estimator::synthetic_estimate;
use rotaug_core::eval::{circular_correlation, compensating_angle, fraction_near_upright, generate_sequence, MotionScript};
use rotaug_core::pipeline::run_sequential;
use rotaug_core::{CoordFrame, Keypoint, PipelineConfig, Pose, SkeletonSchema, SyntheticBackend, SyntheticEstimatorModel};

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn confidence_falls_with_deviation() {
    let schema = SkeletonSchema::body25();
    let gt = Pose::new(vec![Keypoint::new(300.0, 200.0, 1.0); 25], CoordFrame::Original);
    let cfg = rotaug_core::SelectorConfig::default();
    let mut deltas = Vec::new();
    let mut confs = Vec::new();
    for seed in 0..1000u64 {
        let model = SyntheticEstimatorModel { rng_seed: seed, ..Default::default() };
        let delta = (seed % 181) as f64 * if seed % 2 == 0 { 1.0 } else { -1.0 };
        let out = synthetic_estimate(&gt, delta, &model, 0, 0.0);
        deltas.push(delta.abs());
        confs.push(cfg.mean_confidence(&out[0], &schema).unwrap());
    }
    let rho = spearman(&deltas, &confs);
    assert!(rho < -0.9, "spearman {rho}");
}

#[test]
fn upright_walk_stays_near_zero() {
    let schema = SkeletonSchema::body25();
    let frames = generate_sequence(&MotionScript::upright_walk(60), (640, 480), &schema).unwrap();
    for seed in [1u64, 2, 3] {
        let backend = SyntheticBackend::new(SyntheticEstimatorModel { rng_seed: seed, ..Default::default() });
        let r = run_sequential(&backend, &frames, &PipelineConfig::default(), &schema).unwrap();
        let thetas: Vec<f64> = r.iter().filter_map(|f| f.selected_theta).collect();
        assert!(fraction_near_upright(&thetas, 30.0) >= 0.8);
    }
}

#[test]
fn cartwheel_theta_tracks_body() {
    let schema = SkeletonSchema::body25();
    let frames = generate_sequence(&MotionScript::cartwheel(90), (640, 480), &schema).unwrap();
    let backend = SyntheticBackend::new(SyntheticEstimatorModel { rng_seed: 3, ..Default::default() });
    let r = run_sequential(&backend, &frames, &PipelineConfig::default(), &schema).unwrap();
    let (sel, comp): (Vec<f64>, Vec<f64>) = r
        .iter()
        .zip(&frames)
        .filter_map(|(r, f)| r.selected_theta.map(|t| (t, compensating_angle(f.body_angle))))
        .unzip();
    assert!(circular_correlation(&sel, &comp).unwrap() > 0.8);
}

#[test]
fn noiseless_upright_reproduces_ground_truth() {
    let schema = SkeletonSchema::body25();
    let mut script = MotionScript::upright_walk(20);
    script.limb_amplitude = 0.0;
    let frames = generate_sequence(&script, (640, 480), &schema).unwrap();
    let backend = SyntheticBackend::new(SyntheticEstimatorModel {
        sigma0: 0.0,
        sigma1: 0.0,
        dropout_slope: 0.0,
        confidence_noise: 0.0,
        ..Default::default()
    });
    let r = run_sequential(&backend, &frames, &PipelineConfig::default(), &schema).unwrap();
    for (res, f) in r.iter().zip(&frames) {
        for (a, b) in res.selected_pose.keypoints.iter().zip(&f.gt.keypoints) {
            assert!((a.x - b.x).abs() < 1e-6 && (a.y - b.y).abs() < 1e-6);
        }
    }
}
