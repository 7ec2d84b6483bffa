//! `rotaug` subcommands. Exit codes: 0 success, 1 runtime failure, 2 usage.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rotaug_core::eval::{evaluate, generate_sequence, rasterize, MotionKind, MotionScript};
use rotaug_core::selector::DistanceNormalization;

use crate::adapter::save_raster;
use crate::artifacts;
use crate::config::{load_schema, BackendKind, RunConfig};
use crate::error::RunError;
use crate::runner::execute;

#[derive(Debug, Parser)]
#[command(name = "rotaug", version, about = "Rotation test-time augmentation for 2D pose sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate, select and reconstruct poses over a frame sequence.
    Run(Box<RunArgs>),
    /// Generate a synthetic motion with ground truth.
    Simulate(SimulateArgs),
    /// Score a run and a raw baseline against ground truth.
    Evaluate(EvaluateArgs),
    /// Emit a plotting-ready CSV from a run.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    External,
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScriptArg {
    Cartwheel,
    HandstandHold,
    UprightWalk,
}

impl From<ScriptArg> for MotionKind {
    fn from(s: ScriptArg) -> Self {
        match s {
            ScriptArg::Cartwheel => MotionKind::Cartwheel,
            ScriptArg::HandstandHold => MotionKind::HandstandHold,
            ScriptArg::UprightWalk => MotionKind::UprightWalk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    RawSum,
    ScaledToFull,
}

fn parse_canvas(s: &str) -> Result<(u32, u32), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let w: u32 = w.trim().parse().map_err(|e| format!("width: {e}"))?;
    let h: u32 = h.trim().parse().map_err(|e| format!("height: {e}"))?;
    if w == 0 || h == 0 {
        return Err("canvas dimensions must be positive".into());
    }
    Ok((w, h))
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON config or a previous run_manifest.json; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Image directory or list file of frames (external backend).
    #[arg(long)]
    pub frames: Option<PathBuf>,
    /// Estimator backend [default: external].
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    /// Adapter command template with {input} and {output} placeholders.
    #[arg(long)]
    pub adapter_cmd: Option<String>,
    /// Adapter timeout in seconds [default: 120].
    #[arg(long)]
    pub adapter_timeout: Option<f64>,
    /// Motion to simulate (synthetic backend).
    #[arg(long, value_enum)]
    pub script: Option<ScriptArg>,
    /// Frames to simulate with --script [default: 90].
    #[arg(long)]
    pub frames_count: Option<usize>,
    /// Ground truth from `simulate` (synthetic backend).
    #[arg(long)]
    pub ground_truth: Option<PathBuf>,
    /// Simulated canvas as WxH [default: 640x480].
    #[arg(long, value_parser = parse_canvas)]
    pub canvas: Option<(u32, u32)>,
    /// Synthetic estimator seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Angle grid step in degrees; must divide 360 [default: 10].
    #[arg(long)]
    pub step: Option<f64>,
    /// Half-width in degrees of the search window around the previous angle [default: off].
    #[arg(long)]
    pub window: Option<f64>,
    /// Weight of the current frame in the reconstruction [default: 0.8].
    #[arg(long)]
    pub weight: Option<f64>,
    /// Consistency distance threshold in pixels [default: 500].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Candidates shortlisted by distance [default: 5].
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Confidence a joint needs to count [default: 0.05].
    #[arg(long)]
    pub floor: Option<f64>,
    /// Let head joints take part in selection [default: excluded].
    #[arg(long)]
    pub include_head: bool,
    /// Distance normalisation [default: scaled-to-full].
    #[arg(long, value_enum)]
    pub distance_normalization: Option<NormalizationArg>,
    /// Drop joints missing from the selection instead of coasting them.
    #[arg(long)]
    pub no_coasting: bool,
    /// Skeleton schema JSON [default: body_25].
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Output directory [default: rotaug-out].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Maximum concurrent estimator calls [default: logical CPUs].
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Continue past frames where every estimator call failed.
    #[arg(long)]
    pub keep_going: bool,
    /// Keep rotated images and adapter outputs under <out>/intermediates.
    #[arg(long)]
    pub keep_intermediates: bool,
}

impl RunArgs {
    /// Config file (or defaults) with every given flag applied on top.
    pub fn resolve(&self) -> Result<RunConfig, RunError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(b) = self.backend {
            c.backend = match b {
                BackendArg::External => BackendKind::External,
                BackendArg::Synthetic => BackendKind::Synthetic,
            };
        }
        if let Some(v) = &self.frames {
            c.frames = Some(v.clone());
        }
        if let Some(v) = &self.adapter_cmd {
            c.adapter_cmd = Some(v.clone());
        }
        if let Some(v) = self.adapter_timeout {
            c.adapter_timeout_secs = v;
        }
        if let Some(v) = self.script {
            c.script = Some(v.into());
        }
        if let Some(v) = self.frames_count {
            c.frames_count = v;
        }
        if let Some(v) = &self.ground_truth {
            c.ground_truth = Some(v.clone());
        }
        if let Some(v) = self.canvas {
            c.canvas = v;
        }
        if let Some(v) = self.seed {
            c.model.rng_seed = v;
        }
        if let Some(v) = self.step {
            c.pipeline.step = v;
        }
        if let Some(v) = self.window {
            c.pipeline.angle_window = Some(v);
        }
        if let Some(v) = self.weight {
            c.pipeline.weight = v;
        }
        if let Some(v) = self.threshold {
            c.pipeline.selector.distance_threshold = v;
        }
        if let Some(v) = self.top_k {
            c.pipeline.selector.top_k = v;
        }
        if let Some(v) = self.floor {
            c.pipeline.selector.confidence_floor = v;
        }
        if self.include_head {
            c.pipeline.selector.exclude_head = false;
        }
        if let Some(v) = self.distance_normalization {
            c.pipeline.selector.distance_normalization = match v {
                NormalizationArg::RawSum => DistanceNormalization::RawSum,
                NormalizationArg::ScaledToFull => DistanceNormalization::ScaledToFull,
            };
        }
        if self.no_coasting {
            c.pipeline.coasting = false;
        }
        if let Some(v) = &self.schema {
            c.schema = Some(v.clone());
        }
        if let Some(v) = &self.out {
            c.output_dir = v.clone();
        }
        if let Some(v) = self.parallelism {
            c.parallelism = v;
        }
        if self.keep_going {
            c.pipeline.keep_going = true;
        }
        if self.keep_intermediates {
            c.keep_intermediates = true;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub script: ScriptArg,
    #[arg(long, default_value_t = 90)]
    pub frames_count: usize,
    #[arg(long, value_parser = parse_canvas, default_value = "640x480")]
    pub canvas: (u32, u32),
    /// Also render each frame as a stick-figure PNG under <out>/frames.
    #[arg(long)]
    pub rasterize: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Augmented run directory (or a ground-truth file).
    #[arg(long)]
    pub run: PathBuf,
    /// Raw single-rotation run directory (or a ground-truth file).
    #[arg(long)]
    pub baseline: PathBuf,
    #[arg(long)]
    pub ground_truth: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub schema: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Confidence,
    Theta,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub run: PathBuf,
    #[arg(long, value_enum)]
    pub kind: ReportKind,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.resolve()?;
            let summary = execute(&cfg)?;
            println!(
                "{} frames, {} estimator calls -> {}",
                summary.manifest.frames,
                summary.manifest.estimator_calls,
                cfg.output_dir.display()
            );
            Ok(())
        }
        Command::Simulate(args) => simulate(&args),
        Command::Evaluate(args) => evaluate_cmd(&args),
        Command::Report(args) => report(&args),
    }
}

fn simulate(args: &SimulateArgs) -> Result<(), RunError> {
    let schema = load_schema(None)?;
    let script = MotionScript::new(args.script.into(), args.frames_count);
    let frames = generate_sequence(&script, args.canvas, &schema)?;
    let out = &args.out;
    std::fs::create_dir_all(out).map_err(|e| RunError::io(out, e))?;
    let images = if args.rasterize {
        let dir = out.join("frames");
        std::fs::create_dir_all(&dir).map_err(|e| RunError::io(&dir, e))?;
        let mut names = Vec::with_capacity(frames.len());
        for (i, f) in frames.iter().enumerate() {
            let name = PathBuf::from("frames").join(format!("frame_{i:06}.png"));
            save_raster(&rasterize(&f.gt, f.canvas), &out.join(&name))?;
            names.push(name);
        }
        Some(names)
    } else {
        None
    };
    artifacts::write_ground_truth(&out.join(artifacts::GROUND_TRUTH_FILE), &frames, images.as_deref())?;
    println!("{} frames -> {}", frames.len(), out.display());
    Ok(())
}

fn evaluate_cmd(args: &EvaluateArgs) -> Result<(), RunError> {
    let schema = load_schema(args.schema.as_deref())?;
    let gt: Vec<_> = artifacts::read_ground_truth(&args.ground_truth, &schema)?
        .into_iter()
        .map(|f| f.gt)
        .collect();
    let run = artifacts::load_series(&args.run, &schema, true)?;
    let baseline = artifacts::load_series(&args.baseline, &schema, false)?;
    let report = evaluate(&run, &gt, &baseline, &schema)
        .map_err(|e| RunError::format(&args.run, e))?;
    artifacts::write_report(&args.out, &report)?;
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"));
    println!(
        "mpjpe augmented {} px, raw {} px over {} frames",
        fmt(report.mpjpe_augmented),
        fmt(report.mpjpe_raw),
        report.frames
    );
    Ok(())
}

fn report(args: &ReportArgs) -> Result<(), RunError> {
    let run: &Path = &args.run;
    if !run.is_dir() {
        return Err(RunError::io(
            run,
            std::io::Error::new(std::io::ErrorKind::NotFound, "run directory not found"),
        ));
    }
    match args.kind {
        ReportKind::Theta => {
            let rows = artifacts::read_theta_from_poses(run)?;
            artifacts::write_theta_csv(&args.out, &rows)
        }
        ReportKind::Confidence => {
            let rows = artifacts::read_confidence(run)?;
            artifacts::write_confidence_csv(&args.out, &rows)
        }
    }
}
