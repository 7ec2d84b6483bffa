//! Per-frame choice among rotation candidates.
//!
//! The first frame takes the candidate with the highest mean confidence. Later
//! frames keep the candidates whose distance to the previous reconstructed pose
//! is within the threshold, shortlist the `top_k` closest, and take the most
//! confident of those. When nothing is within the threshold the first-frame
//! rule applies instead.

use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{circular_distance_deg, normalize_deg};
use crate::skeleton::{is_considered, mean_confidence, CoordFrame, Pose, SkeletonSchema};

/// How the summed joint distance is normalised before thresholding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceNormalization {
    /// Plain sum over joints detected in both poses.
    RawSum,
    /// Sum scaled up to the full count of selectable joints, so sparse poses
    /// do not win by dropping joints.
    #[default]
    ScaledToFull,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectorConfig {
    pub top_k: usize,
    /// Pixels, compared against the (possibly scaled) distance sum.
    pub distance_threshold: f64,
    pub exclude_head: bool,
    pub confidence_floor: f64,
    pub distance_normalization: DistanceNormalization,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        Self {
            top_k: 5,
            distance_threshold: 500.0,
            exclude_head: true,
            confidence_floor: crate::skeleton::DEFAULT_CONFIDENCE_FLOOR,
            distance_normalization: DistanceNormalization::ScaledToFull,
        }
    }
}

impl SelectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        if !(self.distance_threshold > 0.0) {
            return Err(Error::Config("distance threshold must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.confidence_floor) {
            return Err(Error::Config("confidence floor must be in [0, 1)".into()));
        }
        Ok(())
    }

    pub fn mean_confidence(&self, pose: &Pose, schema: &SkeletonSchema) -> Result<f64> {
        mean_confidence(pose, self.confidence_floor, self.exclude_head, schema)
    }
}

/// A prediction at rotation `theta`, already mapped to the original frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationCandidate {
    pub theta: f64,
    pub pose: Pose,
    pub mean_conf: f64,
    pub distance_to_prev: Option<f64>,
}

impl RotationCandidate {
    pub fn new(theta: f64, pose: Pose, cfg: &SelectorConfig, schema: &SkeletonSchema) -> Result<Self> {
        if pose.frame != CoordFrame::Original {
            return Err(Error::Structural(
                "candidate pose must be in the original frame".into(),
            ));
        }
        let mean_conf = cfg.mean_confidence(&pose, schema)?;
        Ok(Self {
            theta: normalize_deg(theta),
            pose,
            mean_conf,
            distance_to_prev: None,
        })
    }
}

/// Which rule produced the selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    FirstFrame,
    Consistency,
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateDiagnostic {
    pub theta: f64,
    pub distance: Option<f64>,
    pub mean_conf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionDiagnostics {
    pub rule: SelectionRule,
    pub fallback: bool,
    pub candidates: Vec<CandidateDiagnostic>,
}

/// Summed Euclidean distance between joints considered in both poses; `None`
/// when no joint is shared.
pub fn pose_distance(
    current: &Pose,
    previous: &Pose,
    cfg: &SelectorConfig,
    schema: &SkeletonSchema,
) -> Result<Option<f64>> {
    schema.check(current)?;
    schema.check(previous)?;
    let floor = cfg.confidence_floor;
    let (raw, shared) = current
        .keypoints
        .iter()
        .zip(&previous.keypoints)
        .enumerate()
        .filter(|&(k, (c, p))| {
            is_considered(schema, c, k, floor, cfg.exclude_head)
                && is_considered(schema, p, k, floor, cfg.exclude_head)
        })
        .fold((0.0, 0usize), |(sum, n), (_, (c, p))| {
            (sum + libm::hypot(c.x - p.x, c.y - p.y), n + 1)
        });
    if shared == 0 {
        return Ok(None);
    }
    Ok(Some(match cfg.distance_normalization {
        DistanceNormalization::RawSum => raw,
        DistanceNormalization::ScaledToFull => {
            raw * schema.selectable_count(cfg.exclude_head) as f64 / shared as f64
        }
    }))
}

/// θ tie-break: closer to 0° first, then smaller θ.
fn theta_order(a: f64, b: f64) -> Ordering {
    circular_distance_deg(a, 0.0)
        .total_cmp(&circular_distance_deg(b, 0.0))
        .then(a.total_cmp(&b))
}

/// Best-first order for the confidence objective.
fn confidence_order(a: &RotationCandidate, b: &RotationCandidate) -> Ordering {
    b.mean_conf
        .total_cmp(&a.mean_conf)
        .then_with(|| theta_order(a.theta, b.theta))
}

fn distance_key(c: &RotationCandidate) -> f64 {
    c.distance_to_prev.unwrap_or(f64::INFINITY)
}

fn most_confident<'a, I: Iterator<Item = &'a RotationCandidate>>(it: I) -> Option<&'a RotationCandidate> {
    it.min_by(|a, b| confidence_order(a, b))
}

/// First-frame rule: highest mean confidence.
pub fn select_first_frame(candidates: &[RotationCandidate]) -> Result<&RotationCandidate> {
    most_confident(candidates.iter()).ok_or(Error::NoCandidate)
}

/// Consistency rule against the previous reconstructed pose. Distances are
/// written into each candidate.
pub fn select_frame(
    candidates: &mut [RotationCandidate],
    previous: &Pose,
    cfg: &SelectorConfig,
    schema: &SkeletonSchema,
) -> Result<(usize, SelectionDiagnostics)> {
    if candidates.is_empty() {
        return Err(Error::NoCandidate);
    }
    if previous.frame != CoordFrame::Original {
        return Err(Error::Structural(
            "previous pose must be in the original frame".into(),
        ));
    }
    for c in candidates.iter_mut() {
        c.distance_to_prev = pose_distance(&c.pose, previous, cfg, schema)?;
    }

    let mut within: Vec<usize> = (0..candidates.len())
        .filter(|&i| distance_key(&candidates[i]) <= cfg.distance_threshold)
        .collect();

    let (chosen, rule) = if within.is_empty() {
        (index_of_most_confident(candidates, 0..candidates.len()), SelectionRule::Fallback)
    } else {
        within.sort_by(|&i, &j| {
            let (a, b) = (&candidates[i], &candidates[j]);
            distance_key(a)
                .total_cmp(&distance_key(b))
                .then_with(|| confidence_order(a, b))
        });
        within.truncate(cfg.top_k);
        (
            index_of_most_confident(candidates, within.into_iter()),
            SelectionRule::Consistency,
        )
    };
    Ok((chosen, diagnostics(candidates, rule)))
}

fn index_of_most_confident(
    candidates: &[RotationCandidate],
    indices: impl Iterator<Item = usize>,
) -> usize {
    indices
        .min_by(|&i, &j| confidence_order(&candidates[i], &candidates[j]))
        .expect("non-empty index set")
}

pub(crate) fn diagnostics(candidates: &[RotationCandidate], rule: SelectionRule) -> SelectionDiagnostics {
    SelectionDiagnostics {
        rule,
        fallback: rule == SelectionRule::Fallback,
        candidates: candidates
            .iter()
            .map(|c| CandidateDiagnostic {
                theta: c.theta,
                distance: c.distance_to_prev,
                mean_conf: c.mean_conf,
            })
            .collect(),
    }
}
