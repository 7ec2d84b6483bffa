//! Estimator backend interface and the synthetic orientation-sensitive model.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{normalize_deg, wrap_signed_deg, RotationSpec};
use crate::selector::SelectorConfig;
use crate::skeleton::{CoordFrame, Keypoint, Pose, SkeletonSchema};

/// Something that predicts poses on a frame presented at a given rotation.
///
/// Implementations are called concurrently for different rotations of the
/// same frame. Returned poses are in the rotated frame of `spec`.
pub trait EstimatorBackend: Sync {
    type Frame: Sync;

    /// Source size `(W, H)` of `frame`.
    fn frame_size(&self, frame: &Self::Frame) -> (u32, u32);

    fn estimate(&self, frame: &Self::Frame, frame_index: usize, spec: &RotationSpec) -> Result<Vec<Pose>>;
}

/// Keeps the single person with the highest mean confidence. People with no
/// detected joint are ignored; ties keep the earliest.
pub fn reduce_to_single_person(
    people: Vec<Pose>,
    cfg: &SelectorConfig,
    schema: &SkeletonSchema,
) -> Result<Option<Pose>> {
    let mut best: Option<(f64, Pose)> = None;
    for p in people {
        if !p.any_detected() {
            continue;
        }
        let m = cfg.mean_confidence(&p, schema)?;
        if best.as_ref().is_none_or(|(bm, _)| m > *bm) {
            best = Some((m, p));
        }
    }
    Ok(best.map(|(_, p)| p))
}

/// Accuracy model whose confidence, noise and dropout degrade linearly with
/// how far the body's apparent "up" is from image-up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticEstimatorModel {
    pub c_max: f64,
    pub c_min: f64,
    /// Per-axis noise std (px) when upright.
    pub sigma0: f64,
    /// Extra per-axis noise std (px) when fully inverted.
    pub sigma1: f64,
    /// Dropout probability when fully inverted.
    pub dropout_slope: f64,
    /// Std of the additive confidence jitter.
    pub confidence_noise: f64,
    pub rng_seed: u64,
}

impl Default for SyntheticEstimatorModel {
    fn default() -> Self {
        Self {
            c_max: 0.9,
            c_min: 0.2,
            sigma0: 2.0,
            sigma1: 12.0,
            dropout_slope: 0.5,
            confidence_noise: 0.02,
            rng_seed: 0,
        }
    }
}

impl SyntheticEstimatorModel {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.c_min && self.c_min <= self.c_max && self.c_max <= 1.0) {
            return Err(Error::Config(format!(
                "need 0 <= c_min <= c_max <= 1, got c_min={} c_max={}",
                self.c_min, self.c_max
            )));
        }
        if self.sigma0 < 0.0 || self.sigma1 < 0.0 || self.confidence_noise < 0.0 {
            return Err(Error::Config("noise coefficients must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.dropout_slope) {
            return Err(Error::Config("dropout slope must be in [0, 1]".into()));
        }
        Ok(())
    }

    /// Confidence before jitter and clamping at deviation `delta`.
    pub fn expected_confidence(&self, delta: f64) -> f64 {
        self.c_max - (self.c_max - self.c_min) * severity(delta)
    }

    pub fn noise_std(&self, delta: f64) -> f64 {
        self.sigma0 + self.sigma1 * severity(delta)
    }

    pub fn dropout_probability(&self, delta: f64) -> f64 {
        self.dropout_slope * severity(delta)
    }

    fn rng(&self, frame_index: usize, theta: f64) -> ChaCha8Rng {
        let theta_key = libm::round(normalize_deg(theta) * 1e6) as u64;
        let mut h = splitmix64(self.rng_seed);
        h = splitmix64(h ^ frame_index as u64);
        h = splitmix64(h ^ theta_key);
        ChaCha8Rng::seed_from_u64(h)
    }
}

fn severity(delta: f64) -> f64 {
    wrap_signed_deg(delta).abs() / 180.0
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Simulated prediction of `gt` (already in the presented frame) when the body
/// deviates `delta` degrees from upright. Always returns one person.
pub fn synthetic_estimate(
    gt: &Pose,
    delta: f64,
    model: &SyntheticEstimatorModel,
    frame_index: usize,
    theta: f64,
) -> Vec<Pose> {
    let mut rng = model.rng(frame_index, theta);
    let p_drop = model.dropout_probability(delta);
    let std = model.noise_std(delta);
    let conf = model.expected_confidence(delta);
    let keypoints = gt
        .keypoints
        .iter()
        .map(|kp| {
            // fixed draw order per joint keeps streams aligned across models
            let u: f64 = rng.random();
            let nx: f64 = rng.sample(StandardNormal);
            let ny: f64 = rng.sample(StandardNormal);
            let nc: f64 = rng.sample(StandardNormal);
            if !kp.is_detected() || u < p_drop {
                return Keypoint::UNDETECTED;
            }
            let c = (conf + model.confidence_noise * nc).clamp(0.0, 1.0);
            Keypoint::new(kp.x + std * nx, kp.y + std * ny, c)
        })
        .collect();
    vec![Pose::new(keypoints, gt.frame)]
}

/// Ground truth for one synthetic frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticFrame {
    /// Ground-truth pose in the original frame.
    pub gt: Pose,
    /// Rigid rotation of the body about its root, same convention as [`RotationSpec`].
    pub body_angle: f64,
    pub canvas: (u32, u32),
}

/// Backend that answers from ground truth through a [`SyntheticEstimatorModel`].
#[derive(Debug, Clone, Default)]
pub struct SyntheticBackend {
    pub model: SyntheticEstimatorModel,
}

impl SyntheticBackend {
    pub fn new(model: SyntheticEstimatorModel) -> Self {
        Self { model }
    }
}

impl EstimatorBackend for SyntheticBackend {
    type Frame = SyntheticFrame;

    fn frame_size(&self, frame: &SyntheticFrame) -> (u32, u32) {
        frame.canvas
    }

    fn estimate(&self, frame: &SyntheticFrame, frame_index: usize, spec: &RotationSpec) -> Result<Vec<Pose>> {
        let mut gt = frame.gt.clone();
        gt.frame = CoordFrame::Original;
        let presented = spec.rotate_pose(&gt)?;
        // body-up is rotated by body_angle, then by the canvas rotation
        let delta = wrap_signed_deg(frame.body_angle + spec.theta);
        Ok(synthetic_estimate(
            &presented,
            delta,
            &self.model,
            frame_index,
            spec.theta,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gt(k: usize) -> Pose {
        Pose::new(
            (0..k)
                .map(|i| Keypoint::new(100.0 + i as f64, 200.0 - i as f64, 1.0))
                .collect(),
            CoordFrame::Original,
        )
    }

    #[test]
    fn degenerate_model_is_exact() {
        let model = SyntheticEstimatorModel {
            sigma0: 0.0,
            dropout_slope: 0.0,
            confidence_noise: 0.0,
            ..Default::default()
        };
        let out = synthetic_estimate(&gt(25), 0.0, &model, 3, 0.0);
        assert_eq!(out.len(), 1);
        for (a, b) in out[0].keypoints.iter().zip(&gt(25).keypoints) {
            assert_eq!((a.x, a.y), (b.x, b.y));
            assert_eq!(a.confidence, model.c_max);
        }
    }

    #[test]
    fn inverted_confidence_endpoint() {
        let model = SyntheticEstimatorModel {
            c_max: 0.9,
            c_min: 0.1,
            ..Default::default()
        };
        assert!((model.expected_confidence(180.0) - 0.1).abs() < 1e-12);
        assert!((model.expected_confidence(-180.0) - 0.1).abs() < 1e-12);
        assert!((model.expected_confidence(0.0) - 0.9).abs() < 1e-12);
        assert!((model.noise_std(90.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_per_frame_and_theta() {
        let m = SyntheticEstimatorModel::default();
        let a = synthetic_estimate(&gt(25), 40.0, &m, 5, 30.0);
        let b = synthetic_estimate(&gt(25), 40.0, &m, 5, 30.0);
        assert_eq!(a, b);
        let c = synthetic_estimate(&gt(25), 40.0, &m, 6, 30.0);
        assert_ne!(a, c);
        let d = synthetic_estimate(&gt(25), 40.0, &m, 5, 40.0);
        assert_ne!(a, d);
    }

    #[test]
    fn monte_carlo_noise_std() {
        let m = SyntheticEstimatorModel {
            dropout_slope: 0.0,
            ..Default::default()
        };
        let truth = gt(1);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut n = 0.0;
        for i in 0..10_000 {
            let out = synthetic_estimate(&truth, 90.0, &m, i, 0.0);
            let kp = out[0].keypoints[0];
            for e in [kp.x - truth.keypoints[0].x, kp.y - truth.keypoints[0].y] {
                sum += e;
                sum_sq += e * e;
                n += 1.0;
            }
        }
        let mean = sum / n;
        let std = libm::sqrt(sum_sq / n - mean * mean);
        let expected = m.sigma0 + m.sigma1 / 2.0;
        assert!((std - expected).abs() / expected < 0.05, "std {std} vs {expected}");
    }

    #[test]
    fn dropout_rate_tracks_deviation() {
        let m = SyntheticEstimatorModel::default();
        let truth = gt(25);
        let mut dropped = 0usize;
        let trials = 2000;
        for i in 0..trials {
            let out = synthetic_estimate(&truth, 180.0, &m, i, 0.0);
            dropped += out[0].keypoints.iter().filter(|k| !k.is_detected()).count();
        }
        let rate = dropped as f64 / (trials * 25) as f64;
        assert!((rate - 0.5).abs() < 0.02, "dropout rate {rate}");
    }

    #[test]
    fn backend_deviation_uses_body_and_canvas_angles() {
        // body turned 90°, canvas turned 270° → upright on the presented canvas
        let model = SyntheticEstimatorModel {
            sigma0: 0.0,
            dropout_slope: 0.0,
            confidence_noise: 0.0,
            ..Default::default()
        };
        let backend = SyntheticBackend::new(model.clone());
        let frame = SyntheticFrame {
            gt: gt(25),
            body_angle: 90.0,
            canvas: (640, 480),
        };
        let spec = RotationSpec::new(270.0, 640, 480);
        let out = backend.estimate(&frame, 0, &spec).unwrap();
        assert_eq!(out[0].frame, CoordFrame::Rotated(270.0));
        let back = spec.unrotate_pose(&out[0]).unwrap();
        for (a, b) in back.keypoints.iter().zip(&frame.gt.keypoints) {
            assert!((a.x - b.x).abs() < 1e-9 && (a.y - b.y).abs() < 1e-9);
            assert_eq!(a.confidence, model.c_max);
        }
        let off = backend.estimate(&frame, 0, &RotationSpec::new(0.0, 640, 480)).unwrap();
        assert!((off[0].keypoints[0].confidence - model.expected_confidence(90.0)).abs() < 1e-12);
    }

    #[test]
    fn reduce_keeps_most_confident() {
        let s = SkeletonSchema::body25();
        let cfg = SelectorConfig::default();
        let mk = |c: f64| Pose::new(vec![Keypoint::new(1.0, 1.0, c); 25], CoordFrame::Original);
        let out = reduce_to_single_person(vec![mk(0.3), mk(0.8), mk(0.5)], &cfg, &s).unwrap();
        assert_eq!(out.unwrap().keypoints[0].confidence, 0.8);
        assert!(reduce_to_single_person(vec![], &cfg, &s).unwrap().is_none());
        assert!(reduce_to_single_person(vec![Pose::undetected(25)], &cfg, &s)
            .unwrap()
            .is_none());
        assert!(reduce_to_single_person(vec![mk(0.5), Pose::undetected(3)], &cfg, &s).is_ok());
    }

    #[test]
    fn model_validation() {
        assert!(SyntheticEstimatorModel::default().validate().is_ok());
        let bad = SyntheticEstimatorModel {
            c_min: 0.95,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
