//! Fully resolved settings of a `run`, as recorded in `run_manifest.json`.

use std::path::{Path, PathBuf};

use rotaug_core::eval::MotionKind;
use rotaug_core::{PipelineConfig, SkeletonSchema, SyntheticEstimatorModel};
use serde::{Deserialize, Serialize};

use crate::error::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    #[default]
    External,
    Synthetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub pipeline: PipelineConfig,
    pub backend: BackendKind,
    /// Image directory or list file (external backend).
    pub frames: Option<PathBuf>,
    pub adapter_cmd: Option<String>,
    pub adapter_timeout_secs: f64,
    /// Motion to simulate (synthetic backend).
    pub script: Option<MotionKind>,
    pub frames_count: usize,
    pub canvas: (u32, u32),
    /// Previously simulated ground truth (synthetic backend).
    pub ground_truth: Option<PathBuf>,
    pub model: SyntheticEstimatorModel,
    pub schema: Option<PathBuf>,
    pub parallelism: usize,
    pub keep_intermediates: bool,
    pub output_dir: PathBuf,
}

pub fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, std::num::NonZeroUsize::get)
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig::default(),
            backend: BackendKind::External,
            frames: None,
            adapter_cmd: None,
            adapter_timeout_secs: crate::adapter::DEFAULT_TIMEOUT.as_secs_f64(),
            script: None,
            frames_count: 90,
            canvas: (640, 480),
            ground_truth: None,
            model: SyntheticEstimatorModel::default(),
            schema: None,
            parallelism: default_parallelism(),
            keep_intermediates: false,
            output_dir: PathBuf::from("rotaug-out"),
        }
    }
}

impl RunConfig {
    /// Reads a config file: either a bare config or a `run_manifest.json`.
    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?;
        let value = match value.get("config") {
            Some(inner) if value.get("versions").is_some() => inner.clone(),
            _ => value,
        };
        serde_json::from_value(value).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), RunError> {
        self.pipeline.validate()?;
        self.model.validate()?;
        if self.parallelism == 0 {
            return Err(RunError::Usage("--parallelism must be at least 1".into()));
        }
        if self.adapter_timeout_secs.is_nan() || self.adapter_timeout_secs <= 0.0 {
            return Err(RunError::Usage("adapter timeout must be positive".into()));
        }
        match self.backend {
            BackendKind::External => {
                if self.frames.is_none() {
                    return Err(RunError::Usage(
                        "the external backend needs --frames DIR|LIST".into(),
                    ));
                }
                if self.adapter_cmd.is_none() {
                    return Err(RunError::Usage(
                        "the external backend needs --adapter-cmd TEMPLATE".into(),
                    ));
                }
            }
            BackendKind::Synthetic => {
                if self.script.is_none() && self.ground_truth.is_none() {
                    return Err(RunError::Usage(
                        "the synthetic backend needs --script NAME or --ground-truth FILE".into(),
                    ));
                }
                if self.script.is_some() && self.frames_count == 0 {
                    return Err(RunError::Usage("--frames-count must be at least 1".into()));
                }
            }
        }
        Ok(())
    }

    pub fn load_schema(&self) -> Result<SkeletonSchema, RunError> {
        load_schema(self.schema.as_deref())
    }
}

/// Reads a `{ "name", "joints", "head_joints" }` schema, or the body_25 default.
pub fn load_schema(path: Option<&Path>) -> Result<SkeletonSchema, RunError> {
    let Some(path) = path else {
        return Ok(SkeletonSchema::body25());
    };
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))
}
