//! Frame loop with parallel fan-out over rotations.

use std::path::Path;
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;
use rotaug_core::eval::{generate_sequence, MotionScript};
use rotaug_core::{
    EstimatorBackend, FrameResult, PipelineConfig, PipelineState, SkeletonSchema, SyntheticBackend,
};

use crate::adapter::{ExternalAdapter, ExternalBackend, ImageFrame};
use crate::artifacts::{self, Manifest};
use crate::config::{BackendKind, RunConfig};
use crate::error::RunError;
use crate::frames::list_frames;

/// Runs frames in order; rotations of one frame are evaluated on a pool of
/// `parallelism` threads. Frames are pulled lazily from `frames`.
pub fn run_sequence<B, I>(
    backend: &B,
    frames: I,
    cfg: &PipelineConfig,
    schema: &SkeletonSchema,
    parallelism: usize,
) -> Result<Vec<FrameResult>, RunError>
where
    B: EstimatorBackend,
    I: IntoIterator<Item = Result<B::Frame, RunError>>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| RunError::Usage(format!("cannot start worker pool: {e}")))?;
    let mut state = PipelineState::new(cfg)?;
    let mut results = Vec::new();
    for frame in frames {
        let frame = frame?;
        let result = state.process_frame_with(backend, &frame, cfg, schema, |angles, job| {
            pool.install(|| angles.par_iter().map(|&theta| job(theta)).collect())
        })?;
        for (theta, reason) in &result.failures {
            warn!("frame {}: rotation {theta} skipped: {reason}", result.frame_index);
        }
        results.push(result);
    }
    if results.is_empty() {
        return Err(RunError::Usage("no frames to process".into()));
    }
    Ok(results)
}

#[derive(Debug)]
pub struct RunSummary {
    pub results: Vec<FrameResult>,
    pub manifest: Manifest,
    pub elapsed: Duration,
}

/// Executes a fully resolved run and writes its artifacts to `cfg.output_dir`.
pub fn execute(cfg: &RunConfig) -> Result<RunSummary, RunError> {
    cfg.validate()?;
    let schema = cfg.load_schema()?;
    let out = cfg.output_dir.as_path();
    std::fs::create_dir_all(out).map_err(|e| RunError::io(out, e))?;
    let start = Instant::now();
    let results = match cfg.backend {
        BackendKind::Synthetic => run_synthetic(cfg, &schema, out)?,
        BackendKind::External => run_external(cfg, &schema, out)?,
    };
    let elapsed = start.elapsed();
    let manifest = Manifest::new(cfg, &schema, &results, elapsed.as_secs_f64());
    artifacts::write_run(out, &results, &manifest)?;
    info!(
        "{} frames, {} estimator calls, {:.2}s",
        manifest.frames,
        manifest.estimator_calls,
        elapsed.as_secs_f64()
    );
    Ok(RunSummary {
        results,
        manifest,
        elapsed,
    })
}

fn run_synthetic(cfg: &RunConfig, schema: &SkeletonSchema, out: &Path) -> Result<Vec<FrameResult>, RunError> {
    let frames = match (&cfg.ground_truth, &cfg.script) {
        (Some(path), _) => artifacts::read_ground_truth(path, schema)?,
        (None, Some(kind)) => {
            let script = MotionScript::new(kind.clone(), cfg.frames_count);
            let frames = generate_sequence(&script, cfg.canvas, schema)?;
            artifacts::write_ground_truth(&out.join(artifacts::GROUND_TRUTH_FILE), &frames, None)?;
            frames
        }
        (None, None) => unreachable!("validated"),
    };
    let backend = SyntheticBackend::new(cfg.model.clone());
    run_sequence(&backend, frames.into_iter().map(Ok), &cfg.pipeline, schema, cfg.parallelism)
}

fn run_external(cfg: &RunConfig, schema: &SkeletonSchema, out: &Path) -> Result<Vec<FrameResult>, RunError> {
    let source = cfg.frames.as_deref().expect("validated");
    let paths = list_frames(source)?;
    let template = cfg.adapter_cmd.clone().expect("validated");
    let adapter = ExternalAdapter::new(template)
        .with_timeout(Duration::from_secs_f64(cfg.adapter_timeout_secs));
    // scratch space lives next to the outputs when kept, in a temp dir otherwise
    let scratch;
    let workdir = if cfg.keep_intermediates {
        let dir = out.join("intermediates");
        std::fs::create_dir_all(&dir).map_err(|e| RunError::io(&dir, e))?;
        dir
    } else {
        scratch = tempfile::Builder::new()
            .prefix("rotaug-")
            .tempdir()
            .map_err(|e| RunError::io(std::env::temp_dir(), e))?;
        scratch.path().to_path_buf()
    };
    let backend = ExternalBackend {
        adapter,
        schema: schema.clone(),
        workdir,
        keep_intermediates: cfg.keep_intermediates,
    };
    let frames = paths
        .iter()
        .map(|p| ImageFrame::load(p).map_err(RunError::from));
    run_sequence(&backend, frames, &cfg.pipeline, schema, cfg.parallelism)
}
