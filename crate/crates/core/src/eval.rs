//! Synthetic motion with known ground truth, and metrics against it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::SyntheticFrame;
use crate::geometry::{circular_distance_deg, normalize_deg, rotate_vec, Point, Raster};
use crate::pipeline::FrameResult;
use crate::skeleton::{CoordFrame, Keypoint, Pose, SkeletonSchema, BODY25_JOINTS};

/// Parent/child pairs of the 25-joint stick figure.
pub const BODY25_BONES: [(usize, usize); 24] = [
    (8, 1),
    (1, 0),
    (0, 15),
    (0, 16),
    (15, 17),
    (16, 18),
    (1, 2),
    (2, 3),
    (3, 4),
    (1, 5),
    (5, 6),
    (6, 7),
    (8, 9),
    (9, 10),
    (10, 11),
    (8, 12),
    (12, 13),
    (13, 14),
    (14, 19),
    (14, 20),
    (14, 21),
    (11, 22),
    (11, 23),
    (11, 24),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub frame: usize,
    pub body_angle: f64,
    pub root: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionKind {
    /// One full turn, standing at both ends.
    Cartwheel,
    /// Up to inverted over the first quarter, held, then over the top back to standing.
    HandstandHold,
    UprightWalk,
    /// Piecewise-linear body angle and root path.
    CustomKeyframes(Vec<Keyframe>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionScript {
    pub kind: MotionKind,
    pub frames: usize,
    pub root_start: Point,
    pub root_end: Point,
    /// Peak limb swing in degrees; 0 freezes the limbs.
    pub limb_amplitude: f64,
    pub limb_period: f64,
    /// Multiplier on all bone lengths.
    pub scale: f64,
}

impl MotionScript {
    pub fn new(kind: MotionKind, frames: usize) -> Self {
        let limb_amplitude = match kind {
            MotionKind::UprightWalk => 25.0,
            _ => 15.0,
        };
        Self {
            kind,
            frames,
            root_start: Point::new(200.0, 250.0),
            root_end: Point::new(440.0, 250.0),
            limb_amplitude,
            limb_period: 30.0,
            scale: 1.0,
        }
    }

    pub fn cartwheel(frames: usize) -> Self {
        Self::new(MotionKind::Cartwheel, frames)
    }

    pub fn handstand_hold(frames: usize) -> Self {
        Self::new(MotionKind::HandstandHold, frames)
    }

    pub fn upright_walk(frames: usize) -> Self {
        Self::new(MotionKind::UprightWalk, frames)
    }

    fn progress(&self, t: usize) -> f64 {
        if self.frames <= 1 {
            0.0
        } else {
            t as f64 / (self.frames - 1) as f64
        }
    }

    /// Body rotation at frame `t` (0-based), unwrapped so it is monotone for
    /// the rotating scripts.
    pub fn body_angle(&self, t: usize) -> f64 {
        let s = self.progress(t);
        match &self.kind {
            MotionKind::Cartwheel => 360.0 * s,
            MotionKind::HandstandHold => {
                if s < 0.25 {
                    180.0 * s / 0.25
                } else if s <= 0.75 {
                    180.0
                } else {
                    180.0 + 180.0 * (s - 0.75) / 0.25
                }
            }
            MotionKind::UprightWalk => 0.0,
            MotionKind::CustomKeyframes(keys) => interpolate(keys, t).0,
        }
    }

    pub fn root(&self, t: usize) -> Point {
        if let MotionKind::CustomKeyframes(keys) = &self.kind {
            return interpolate(keys, t).1;
        }
        let s = self.progress(t);
        Point::new(
            self.root_start.x + s * (self.root_end.x - self.root_start.x),
            self.root_start.y + s * (self.root_end.y - self.root_start.y),
        )
    }

    /// Ground-truth pose at frame `t` in image coordinates.
    pub fn pose_at(&self, t: usize) -> Pose {
        let local = figure(self.limb_swing(t), self.scale);
        let beta = self.body_angle(t);
        let root = self.root(t);
        let keypoints = local
            .iter()
            .map(|&p| {
                let r = rotate_vec(p, beta);
                Keypoint::new(root.x + r.x, root.y + r.y, 1.0)
            })
            .collect();
        Pose::new(keypoints, CoordFrame::Original)
    }

    fn limb_swing(&self, t: usize) -> f64 {
        if self.limb_amplitude == 0.0 || self.limb_period <= 0.0 {
            return 0.0;
        }
        self.limb_amplitude * libm::sin(2.0 * PI * t as f64 / self.limb_period)
    }
}

fn interpolate(keys: &[Keyframe], t: usize) -> (f64, Point) {
    let Some(first) = keys.first() else {
        return (0.0, Point::default());
    };
    if t <= first.frame {
        return (first.body_angle, first.root);
    }
    for pair in keys.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if t <= b.frame {
            let span = (b.frame - a.frame).max(1) as f64;
            let s = (t - a.frame) as f64 / span;
            return (
                a.body_angle + s * (b.body_angle - a.body_angle),
                Point::new(a.root.x + s * (b.root.x - a.root.x), a.root.y + s * (b.root.y - a.root.y)),
            );
        }
    }
    let last = keys[keys.len() - 1];
    (last.body_angle, last.root)
}

/// Unit vector pointing down, turned by `deg`.
fn limb(deg: f64) -> Point {
    rotate_vec(Point::new(0.0, 1.0), deg)
}

fn add(a: Point, b: Point, len: f64) -> Point {
    Point::new(a.x + len * b.x, a.y + len * b.y)
}

/// Body-local stick figure rooted at the mid hip, upright (head towards −y).
fn figure(swing: f64, scale: f64) -> [Point; 25] {
    let s = scale;
    let offset = |p: Point, dx: f64, dy: f64| Point::new(p.x + s * dx, p.y + s * dy);
    let mid_hip = Point::new(0.0, 0.0);
    let neck = offset(mid_hip, 0.0, -50.0);
    let nose = offset(neck, 0.0, -22.0);
    let r_sh = offset(neck, -18.0, 2.0);
    let l_sh = offset(neck, 18.0, 2.0);
    let r_elbow = add(r_sh, limb(20.0 + swing), 28.0 * s);
    let l_elbow = add(l_sh, limb(-20.0 - swing), 28.0 * s);
    let r_wrist = add(r_elbow, limb(10.0 + 1.5 * swing), 25.0 * s);
    let l_wrist = add(l_elbow, limb(-10.0 - 1.5 * swing), 25.0 * s);
    let r_hip = offset(mid_hip, -10.0, 0.0);
    let l_hip = offset(mid_hip, 10.0, 0.0);
    let r_leg = 4.0 - 0.6 * swing;
    let l_leg = -4.0 + 0.6 * swing;
    let r_knee = add(r_hip, limb(r_leg), 38.0 * s);
    let l_knee = add(l_hip, limb(l_leg), 38.0 * s);
    let r_shin = r_leg - 0.3 * swing.abs();
    let l_shin = l_leg + 0.3 * swing.abs();
    let r_ankle = add(r_knee, limb(r_shin), 36.0 * s);
    let l_ankle = add(l_knee, limb(l_shin), 36.0 * s);
    // feet are rigid in the shin frame
    let foot = |ankle: Point, shin: f64, dx: f64, dy: f64| {
        let v = rotate_vec(Point::new(s * dx, s * dy), shin);
        Point::new(ankle.x + v.x, ankle.y + v.y)
    };
    [
        nose,
        neck,
        r_sh,
        r_elbow,
        r_wrist,
        l_sh,
        l_elbow,
        l_wrist,
        mid_hip,
        r_hip,
        r_knee,
        r_ankle,
        l_hip,
        l_knee,
        l_ankle,
        offset(nose, -5.0, -4.0),
        offset(nose, 5.0, -4.0),
        offset(nose, -10.0, 1.0),
        offset(nose, 10.0, 1.0),
        foot(l_ankle, l_shin, 7.0, 7.0),
        foot(l_ankle, l_shin, 11.0, 6.0),
        foot(l_ankle, l_shin, 0.0, 4.0),
        foot(r_ankle, r_shin, -7.0, 7.0),
        foot(r_ankle, r_shin, -11.0, 6.0),
        foot(r_ankle, r_shin, 0.0, 4.0),
    ]
}

fn require_body25(schema: &SkeletonSchema) -> Result<()> {
    let matches = schema.len() == BODY25_JOINTS.len()
        && schema
            .joint_names()
            .iter()
            .zip(BODY25_JOINTS)
            .all(|(a, b)| a == b);
    if matches {
        Ok(())
    } else {
        Err(Error::Generation(format!(
            "the stick figure is only defined for the body_25 layout, not `{}`",
            schema.name()
        )))
    }
}

/// Poses the stick figure for every frame of `script`.
pub fn generate_sequence(
    script: &MotionScript,
    canvas: (u32, u32),
    schema: &SkeletonSchema,
) -> Result<Vec<SyntheticFrame>> {
    require_body25(schema)?;
    if script.frames == 0 {
        return Err(Error::Generation("a sequence needs at least one frame".into()));
    }
    let (w, h) = (f64::from(canvas.0), f64::from(canvas.1));
    (0..script.frames)
        .map(|t| {
            let gt = script.pose_at(t);
            if let Some((k, kp)) = gt
                .keypoints
                .iter()
                .enumerate()
                .find(|(_, kp)| kp.x < 0.0 || kp.y < 0.0 || kp.x > w - 1.0 || kp.y > h - 1.0)
            {
                return Err(Error::Generation(format!(
                    "frame {t}: joint {k} at ({:.1}, {:.1}) leaves the {}x{} canvas",
                    kp.x, kp.y, canvas.0, canvas.1
                )));
            }
            Ok(SyntheticFrame {
                gt,
                body_angle: normalize_deg(script.body_angle(t)),
                canvas,
            })
        })
        .collect()
}

/// Draws the skeleton as white 3 px strokes on black.
pub fn rasterize(pose: &Pose, canvas: (u32, u32)) -> Raster {
    let mut img = Raster::new(canvas.0, canvas.1, 3);
    for &(a, b) in &BODY25_BONES {
        let (Some(pa), Some(pb)) = (pose.keypoints.get(a), pose.keypoints.get(b)) else {
            continue;
        };
        if !(pa.is_detected() && pb.is_detected()) {
            continue;
        }
        let steps = libm::ceil(libm::hypot(pb.x - pa.x, pb.y - pa.y)).max(1.0) as usize;
        for i in 0..=steps {
            let s = i as f64 / steps as f64;
            let x = libm::round(pa.x + s * (pb.x - pa.x)) as i64;
            let y = libm::round(pa.y + s * (pb.y - pa.y)) as i64;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    img.put(x + dx, y + dy, 255);
                }
            }
        }
    }
    img
}

/// One run's predictions reduced to what the metrics need.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunSeries {
    pub poses: Vec<Pose>,
    pub mean_conf: Vec<f64>,
    pub estimator_calls: usize,
}

impl RunSeries {
    /// Reconstructed poses of an augmented run.
    pub fn reconstructed(results: &[FrameResult]) -> Self {
        Self {
            poses: results.iter().map(|r| r.reconstructed_pose.clone()).collect(),
            mean_conf: results.iter().map(|r| r.mean_conf_selected).collect(),
            estimator_calls: results.iter().map(|r| r.estimator_calls).sum(),
        }
    }

    /// Selected poses, as used for a single-rotation baseline run.
    pub fn selected(results: &[FrameResult]) -> Self {
        Self {
            poses: results.iter().map(|r| r.selected_pose.clone()).collect(),
            mean_conf: results.iter().map(|r| r.mean_conf_selected).collect(),
            estimator_calls: results.iter().map(|r| r.estimator_calls).sum(),
        }
    }
}

pub const PCK_ALPHAS: [f64; 2] = [0.1, 0.2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PckScore {
    pub alpha: f64,
    pub augmented: f64,
    pub raw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub frames: usize,
    /// `None` when no joint was detected at all.
    pub mpjpe_augmented: Option<f64>,
    pub mpjpe_raw: Option<f64>,
    pub pck: Vec<PckScore>,
    pub mean_conf_augmented: f64,
    pub mean_conf_raw: f64,
    pub estimator_calls_augmented: usize,
    pub estimator_calls_raw: usize,
    pub conf_augmented: Vec<f64>,
    pub conf_raw: Vec<f64>,
    /// Per-frame mean joint error; `None` for frames with nothing detected.
    pub error_augmented: Vec<Option<f64>>,
    pub error_raw: Vec<Option<f64>>,
}

struct ErrorStats {
    per_frame: Vec<Option<f64>>,
    pooled: Option<f64>,
    pck: Vec<f64>,
}

/// Body-size normaliser: neck to mid-hip distance, or the bounding-box
/// diagonal when the layout has no such joints.
fn torso_size(gt: &Pose, schema: &SkeletonSchema) -> f64 {
    if let (Some(n), Some(r)) = (schema.joint_index("neck"), schema.joint_index("mid_hip")) {
        let (a, b) = (gt.keypoints[n], gt.keypoints[r]);
        if a.is_detected() && b.is_detected() {
            return libm::hypot(a.x - b.x, a.y - b.y);
        }
    }
    let pts = gt.keypoints.iter().filter(|k| k.is_detected());
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for k in pts {
        x0 = x0.min(k.x);
        y0 = y0.min(k.y);
        x1 = x1.max(k.x);
        y1 = y1.max(k.y);
    }
    if x1 < x0 {
        0.0
    } else {
        libm::hypot(x1 - x0, y1 - y0)
    }
}

fn error_stats(pred: &[Pose], gt: &[Pose], schema: &SkeletonSchema) -> Result<ErrorStats> {
    let mut per_frame = Vec::with_capacity(gt.len());
    let (mut total, mut count) = (0.0, 0usize);
    let mut hits = vec![0usize; PCK_ALPHAS.len()];
    let mut gt_joints = 0usize;
    for (p, g) in pred.iter().zip(gt) {
        schema.check(p)?;
        schema.check(g)?;
        let size = torso_size(g, schema);
        let (mut ft, mut fc) = (0.0, 0usize);
        for (a, b) in p.keypoints.iter().zip(&g.keypoints) {
            if !b.is_detected() {
                continue;
            }
            gt_joints += 1;
            if !a.is_detected() {
                continue;
            }
            let e = libm::hypot(a.x - b.x, a.y - b.y);
            ft += e;
            fc += 1;
            for (h, alpha) in hits.iter_mut().zip(PCK_ALPHAS) {
                if e <= alpha * size {
                    *h += 1;
                }
            }
        }
        per_frame.push((fc > 0).then(|| ft / fc as f64));
        total += ft;
        count += fc;
    }
    Ok(ErrorStats {
        per_frame,
        pooled: (count > 0).then(|| total / count as f64),
        pck: hits
            .iter()
            .map(|&h| if gt_joints == 0 { 0.0 } else { h as f64 / gt_joints as f64 })
            .collect(),
    })
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Compares an augmented run and a raw baseline against ground truth.
///
/// MPJPE pools every detected joint of every frame. PCK counts undetected
/// joints as misses.
pub fn evaluate(
    augmented: &RunSeries,
    ground_truth: &[Pose],
    baseline: &RunSeries,
    schema: &SkeletonSchema,
) -> Result<EvalReport> {
    let (na, ng, nb) = (augmented.poses.len(), ground_truth.len(), baseline.poses.len());
    if na != ng || nb != ng {
        return Err(Error::Usage(format!(
            "frame counts differ: run has {na}, ground truth has {ng}, baseline has {nb}"
        )));
    }
    let aug = error_stats(&augmented.poses, ground_truth, schema)?;
    let raw = error_stats(&baseline.poses, ground_truth, schema)?;
    Ok(EvalReport {
        frames: ng,
        mpjpe_augmented: aug.pooled,
        mpjpe_raw: raw.pooled,
        pck: PCK_ALPHAS
            .iter()
            .enumerate()
            .map(|(i, &alpha)| PckScore {
                alpha,
                augmented: aug.pck[i],
                raw: raw.pck[i],
            })
            .collect(),
        mean_conf_augmented: mean(&augmented.mean_conf),
        mean_conf_raw: mean(&baseline.mean_conf),
        estimator_calls_augmented: augmented.estimator_calls,
        estimator_calls_raw: baseline.estimator_calls,
        conf_augmented: augmented.mean_conf.clone(),
        conf_raw: baseline.mean_conf.clone(),
        error_augmented: aug.per_frame,
        error_raw: raw.per_frame,
    })
}

/// Rotation θ that turns a body at `body_angle` back upright.
pub fn compensating_angle(body_angle: f64) -> f64 {
    normalize_deg(360.0 - body_angle)
}

/// Fisher–Lee circular–circular correlation of paired angles in degrees.
///
/// Built from pairwise differences, so it needs no mean direction and stays
/// defined when the angles cover the whole circle.
pub fn circular_correlation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let (mut num, mut da, mut db) = (0.0, 0.0, 0.0);
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let sa = libm::sin((a[i] - a[j]).to_radians());
            let sb = libm::sin((b[i] - b[j]).to_radians());
            num += sa * sb;
            da += sa * sa;
            db += sb * sb;
        }
    }
    let den = libm::sqrt(da * db);
    (den > 0.0).then(|| num / den)
}

/// Fraction of `thetas` within `tolerance` degrees of 0 on the circle.
pub fn fraction_near_upright(thetas: &[f64], tolerance: f64) -> f64 {
    if thetas.is_empty() {
        return 0.0;
    }
    thetas
        .iter()
        .filter(|&&t| circular_distance_deg(t, 0.0) <= tolerance)
        .count() as f64
        / thetas.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_without_limbs_keeps_heights() {
        let mut script = MotionScript::upright_walk(10);
        script.limb_amplitude = 0.0;
        let frames = generate_sequence(&script, (640, 480), &SkeletonSchema::body25()).unwrap();
        for f in &frames[1..] {
            for (a, b) in f.gt.keypoints.iter().zip(&frames[0].gt.keypoints) {
                assert!((a.y - b.y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn cartwheel_angle_monotone_full_turn() {
        let script = MotionScript::cartwheel(90);
        assert_eq!(script.body_angle(0), 0.0);
        assert_eq!(script.body_angle(89), 360.0);
        for t in 1..90 {
            assert!(script.body_angle(t) > script.body_angle(t - 1));
        }
    }

    #[test]
    fn handstand_reaches_and_holds_inverted() {
        let script = MotionScript::handstand_hold(80);
        assert_eq!(script.body_angle(0), 0.0);
        assert_eq!(script.body_angle(40), 180.0);
        assert_eq!(script.body_angle(79), 360.0);
    }

    #[test]
    fn bone_lengths_constant() {
        let schema = SkeletonSchema::body25();
        let kf = MotionKind::CustomKeyframes(vec![
            Keyframe { frame: 0, body_angle: 0.0, root: Point::new(300.0, 240.0) },
            Keyframe { frame: 20, body_angle: 135.0, root: Point::new(340.0, 220.0) },
            Keyframe { frame: 39, body_angle: -60.0, root: Point::new(280.0, 260.0) },
        ]);
        for script in [
            MotionScript::cartwheel(90),
            MotionScript::handstand_hold(60),
            MotionScript::upright_walk(45),
            MotionScript::new(kf, 40),
        ] {
            let frames = generate_sequence(&script, (640, 480), &schema).unwrap();
            let lengths = |p: &Pose| -> Vec<f64> {
                BODY25_BONES
                    .iter()
                    .map(|&(a, b)| {
                        let (pa, pb) = (p.keypoints[a], p.keypoints[b]);
                        ((pa.x - pb.x).powi(2) + (pa.y - pb.y).powi(2)).sqrt()
                    })
                    .collect()
            };
            let reference = lengths(&frames[0].gt);
            for f in &frames {
                for (l, r) in lengths(&f.gt).iter().zip(&reference) {
                    assert!((l - r).abs() < 1e-9, "{:?}: {l} vs {r}", script.kind);
                }
            }
        }
    }

    #[test]
    fn generation_errors() {
        let schema = SkeletonSchema::body25();
        assert!(generate_sequence(&MotionScript::cartwheel(0), (640, 480), &schema).is_err());
        assert!(matches!(
            generate_sequence(&MotionScript::cartwheel(10), (200, 200), &schema),
            Err(Error::Generation(_))
        ));
        let other = SkeletonSchema::new("x", vec!["a".into(), "b".into()], []).unwrap();
        assert!(generate_sequence(&MotionScript::cartwheel(10), (640, 480), &other).is_err());
    }

    #[test]
    fn rasterized_skeleton_covers_joints() {
        let pose = MotionScript::upright_walk(1).pose_at(0);
        let img = rasterize(&pose, (640, 480));
        for kp in &pose.keypoints {
            let v = img.pixel(libm::round(kp.x) as u32, libm::round(kp.y) as u32);
            assert_eq!(v, &[255, 255, 255]);
        }
    }

    fn series(poses: Vec<Pose>) -> RunSeries {
        let n = poses.len();
        RunSeries {
            poses,
            mean_conf: vec![0.5; n],
            estimator_calls: n,
        }
    }

    #[test]
    fn perfect_prediction() {
        let schema = SkeletonSchema::body25();
        let gt: Vec<Pose> = (0..5).map(|t| MotionScript::cartwheel(5).pose_at(t)).collect();
        let r = evaluate(&series(gt.clone()), &gt, &series(gt.clone()), &schema).unwrap();
        assert_eq!(r.mpjpe_augmented, Some(0.0));
        assert!(r.pck.iter().all(|p| p.augmented == 1.0 && p.raw == 1.0));
    }

    #[test]
    fn single_joint_offset() {
        let schema = SkeletonSchema::body25();
        let gt = vec![MotionScript::upright_walk(1).pose_at(0)];
        let mut pred = gt.clone();
        pred[0].keypoints[4].x += 3.0;
        pred[0].keypoints[4].y += 4.0;
        let r = evaluate(&series(pred), &gt, &series(gt.clone()), &schema).unwrap();
        assert!((r.mpjpe_augmented.unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(r.mpjpe_raw, Some(0.0));
    }

    #[test]
    fn length_mismatch_names_counts() {
        let schema = SkeletonSchema::body25();
        let gt = vec![Pose::undetected(25); 3];
        let err = evaluate(&series(gt[..2].to_vec()), &gt, &series(gt.clone()), &schema).unwrap_err();
        let msg = alloc::string::ToString::to_string(&err);
        assert!(msg.contains('2') && msg.contains('3'), "{msg}");
    }

    #[test]
    fn correlation_extremes() {
        let a: Vec<f64> = (0..36).map(|i| f64::from(i) * 10.0).collect();
        let shifted: Vec<f64> = a.iter().map(|x| normalize_deg(x + 40.0)).collect();
        assert!((circular_correlation(&a, &shifted).unwrap() - 1.0).abs() < 1e-12);
        let mirrored: Vec<f64> = a.iter().map(|x| normalize_deg(-x)).collect();
        assert!((circular_correlation(&a, &mirrored).unwrap() + 1.0).abs() < 1e-12);
        assert!(circular_correlation(&a[..1], &a[..1]).is_none());
        assert_eq!(compensating_angle(90.0), 270.0);
        assert_eq!(compensating_angle(0.0), 0.0);
        assert_eq!(fraction_near_upright(&[0.0, 350.0, 40.0, 330.0], 30.0), 0.75);
    }
}
