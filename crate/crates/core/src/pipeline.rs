//! Per-frame orchestration: angle scheduling, candidate assembly, selection and
//! reconstruction.
//!
//! Fan-out over rotations is delegated to a caller-supplied mapper so that the
//! std runner can evaluate angles in parallel while this crate stays `no_std`.
//! Results are ordered by θ before selection, so evaluation order never
//! affects the outcome.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{reduce_to_single_person, EstimatorBackend};
use crate::geometry::{circular_distance_deg, normalize_deg, AngleGrid, RotationSpec};
use crate::reconstructor::{ReconstructionState, DEFAULT_WEIGHT};
use crate::selector::{
    diagnostics, select_first_frame, select_frame, CandidateDiagnostic, RotationCandidate,
    SelectionRule, SelectorConfig,
};
use crate::skeleton::{Pose, SkeletonSchema};

/// Algorithmic settings of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Angle grid step `d` in degrees.
    pub step: f64,
    pub selector: SelectorConfig,
    /// Weight `w` of the current frame in the reconstruction blend.
    pub weight: f64,
    pub coasting: bool,
    /// Half-width in degrees of the window around the previous θ; `None` evaluates the full grid.
    pub angle_window: Option<f64>,
    /// Also evaluate θ = 0 when the window skips it, for the raw-confidence series.
    pub raw_baseline: bool,
    /// Treat a frame whose estimator calls all failed as a frame with no person.
    pub keep_going: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            step: 10.0,
            selector: SelectorConfig::default(),
            weight: DEFAULT_WEIGHT,
            coasting: true,
            angle_window: None,
            raw_baseline: true,
            keep_going: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        AngleGrid::new(self.step)?;
        self.selector.validate()?;
        ReconstructionState::new(self.weight, self.coasting)?;
        if let Some(win) = self.angle_window {
            if !(win >= self.step && win <= 180.0) {
                return Err(Error::Config(format!(
                    "angle window {win} must satisfy step ({}) <= window <= 180",
                    self.step
                )));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<AngleGrid> {
        AngleGrid::new(self.step)
    }
}

/// Angles to evaluate at frame `t` (0-based).
pub fn angle_set_for_frame(t: usize, prev_theta: Option<f64>, cfg: &PipelineConfig) -> Result<Vec<f64>> {
    let grid = cfg.grid()?;
    let (Some(win), Some(prev), true) = (cfg.angle_window, prev_theta, t > 0) else {
        return Ok(grid.angles().to_vec());
    };
    let step = grid.step();
    // walk the circle from prev − win so wrapped windows stay contiguous
    let start = libm::ceil((prev - win) / step - 1e-9) as i64;
    let end = libm::floor((prev + win) / step + 1e-9) as i64;
    let n = grid.len() as i64;
    let mut out = Vec::new();
    for i in start..=end {
        let theta = grid.angles()[i.rem_euclid(n) as usize];
        if circular_distance_deg(theta, prev) <= win + 1e-9 && !out.contains(&theta) {
            out.push(theta);
        }
    }
    Ok(out)
}

/// Everything decided about one frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameResult {
    pub frame_index: usize,
    /// `None` when no rotation produced a person.
    pub selected_theta: Option<f64>,
    pub selected_pose: Pose,
    pub reconstructed_pose: Pose,
    pub mean_conf_selected: f64,
    /// Mean confidence of the unrotated (θ = 0) prediction, if evaluated.
    pub mean_conf_raw: Option<f64>,
    pub fallback_fired: bool,
    pub rule: Option<SelectionRule>,
    pub estimator_calls: usize,
    /// Extra θ = 0 calls made only for the raw series.
    pub baseline_calls: usize,
    pub failures: Vec<(f64, String)>,
    pub candidates: Vec<CandidateDiagnostic>,
}

/// Sequential state carried from frame to frame.
#[derive(Debug, Clone)]
pub struct PipelineState {
    pub reconstruction: ReconstructionState,
    pub prev_theta: Option<f64>,
    pub next_frame: usize,
}

impl PipelineState {
    pub fn new(cfg: &PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            reconstruction: ReconstructionState::new(cfg.weight, cfg.coasting)?,
            prev_theta: None,
            next_frame: 0,
        })
    }

    /// Runs one frame through `backend`, evaluating rotations with `map`.
    ///
    /// `map` receives the angle list and a per-angle job and must return one
    /// result per angle, in the same order.
    pub fn process_frame_with<B, M>(
        &mut self,
        backend: &B,
        frame: &B::Frame,
        cfg: &PipelineConfig,
        schema: &SkeletonSchema,
        map: M,
    ) -> Result<FrameResult>
    where
        B: EstimatorBackend,
        M: FnOnce(&[f64], &(dyn Fn(f64) -> Result<Vec<Pose>> + Sync)) -> Vec<Result<Vec<Pose>>>,
    {
        let index = self.next_frame;
        let angles = angle_set_for_frame(index, self.prev_theta, cfg)?;
        let needs_baseline = cfg.raw_baseline && !angles.contains(&0.0);
        let mut jobs = angles.clone();
        if needs_baseline {
            jobs.push(0.0);
        }
        let (w, h) = backend.frame_size(frame);
        let job = |theta: f64| -> Result<Vec<Pose>> {
            let spec = RotationSpec::new(theta, w, h);
            let people = backend.estimate(frame, index, &spec)?;
            people.iter().map(|p| spec.unrotate_pose(p)).collect()
        };
        let mut outputs = map(&jobs, &job);
        if outputs.len() != jobs.len() {
            return Err(Error::Structural(format!(
                "fan-out returned {} results for {} angles",
                outputs.len(),
                jobs.len()
            )));
        }
        let baseline = if needs_baseline { outputs.pop() } else { None };
        let evaluated: Vec<(f64, Result<Vec<Pose>>)> = angles.into_iter().zip(outputs).collect();
        self.absorb(evaluated, baseline, cfg, schema)
    }

    /// Sequential convenience wrapper around [`process_frame_with`](Self::process_frame_with).
    pub fn process_frame<B: EstimatorBackend>(
        &mut self,
        backend: &B,
        frame: &B::Frame,
        cfg: &PipelineConfig,
        schema: &SkeletonSchema,
    ) -> Result<FrameResult> {
        self.process_frame_with(backend, frame, cfg, schema, |angles, job| {
            angles.iter().map(|&t| job(t)).collect()
        })
    }

    /// Selection and reconstruction from per-angle outputs already mapped to
    /// the original frame. `baseline` is a separate θ = 0 evaluation, if any.
    pub fn absorb(
        &mut self,
        evaluated: Vec<(f64, Result<Vec<Pose>>)>,
        baseline: Option<Result<Vec<Pose>>>,
        cfg: &PipelineConfig,
        schema: &SkeletonSchema,
    ) -> Result<FrameResult> {
        let index = self.next_frame;
        let estimator_calls = evaluated.len();
        let mut failures = Vec::new();
        let mut candidates = Vec::new();
        let mut raw = None;

        for (theta, outcome) in evaluated {
            let theta = normalize_deg(theta);
            let person = outcome
                .and_then(|people| reduce_to_single_person(people, &cfg.selector, schema))
                .and_then(|p| {
                    p.map(|p| RotationCandidate::new(theta, p, &cfg.selector, schema))
                        .transpose()
                });
            match person {
                Ok(c) => {
                    if theta == 0.0 {
                        raw = Some(c.as_ref().map_or(0.0, |c| c.mean_conf));
                    }
                    candidates.extend(c);
                }
                Err(e) => failures.push((theta, e.to_string())),
            }
        }
        let grid_failures = failures.len();
        let baseline_calls = usize::from(baseline.is_some());
        if let Some(outcome) = baseline {
            match outcome.and_then(|people| reduce_to_single_person(people, &cfg.selector, schema)) {
                Ok(p) => {
                    raw = Some(match p {
                        Some(p) => cfg.selector.mean_confidence(&p, schema)?,
                        None => 0.0,
                    });
                }
                Err(e) => failures.push((0.0, e.to_string())),
            }
        }

        if estimator_calls > 0 && grid_failures == estimator_calls && !cfg.keep_going {
            return Err(Error::FrameFailed {
                frame: index,
                calls: estimator_calls,
                first: failures.swap_remove(0).1,
            });
        }

        candidates.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        let result = if candidates.is_empty() {
            let carried = self
                .reconstruction
                .previous
                .clone()
                .unwrap_or_else(|| Pose::undetected(schema.len()));
            FrameResult {
                frame_index: index,
                selected_theta: None,
                selected_pose: Pose::undetected(schema.len()),
                reconstructed_pose: carried,
                mean_conf_selected: 0.0,
                mean_conf_raw: raw,
                fallback_fired: false,
                rule: None,
                estimator_calls,
                baseline_calls,
                failures,
                candidates: Vec::new(),
            }
        } else {
            let (chosen, diag) = match self.reconstruction.previous.clone() {
                None => {
                    let best = select_first_frame(&candidates)?.theta;
                    let i = candidates
                        .iter()
                        .position(|c| c.theta == best)
                        .expect("selected candidate is in the list");
                    (i, diagnostics(&candidates, SelectionRule::FirstFrame))
                }
                Some(prev) => select_frame(&mut candidates, &prev, &cfg.selector, schema)?,
            };
            let selected = &candidates[chosen];
            let reconstructed = self.reconstruction.reconstruct(&selected.pose)?;
            self.prev_theta = Some(selected.theta);
            FrameResult {
                frame_index: index,
                selected_theta: Some(selected.theta),
                selected_pose: selected.pose.clone(),
                reconstructed_pose: reconstructed,
                mean_conf_selected: selected.mean_conf,
                mean_conf_raw: raw,
                fallback_fired: diag.fallback,
                rule: Some(diag.rule),
                estimator_calls,
                baseline_calls,
                failures,
                candidates: diag.candidates,
            }
        };
        self.next_frame += 1;
        Ok(result)
    }
}

/// Processes `frames` in order on the calling thread.
pub fn run_sequential<B: EstimatorBackend>(
    backend: &B,
    frames: &[B::Frame],
    cfg: &PipelineConfig,
    schema: &SkeletonSchema,
) -> Result<Vec<FrameResult>> {
    if frames.is_empty() {
        return Err(Error::Usage("no frames to process".into()));
    }
    let mut state = PipelineState::new(cfg)?;
    frames
        .iter()
        .map(|f| state.process_frame(backend, f, cfg, schema))
        .collect()
}
