//! Run outputs: `poses.jsonl`, `confidence.csv`, `theta.csv`,
//! `run_manifest.json`, plus `ground_truth.jsonl` for simulations and the
//! evaluation report.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rotaug_core::estimator::SyntheticFrame;
use rotaug_core::eval::{EvalReport, RunSeries};
use rotaug_core::selector::CandidateDiagnostic;
use rotaug_core::{CoordFrame, FrameResult, Pose, SkeletonSchema};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::RunError;
use crate::wire::WirePerson;

pub const POSES_FILE: &str = "poses.jsonl";
pub const CONFIDENCE_FILE: &str = "confidence.csv";
pub const THETA_FILE: &str = "theta.csv";
pub const MANIFEST_FILE: &str = "run_manifest.json";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.jsonl";
pub const REPORT_JSON: &str = "report.json";
pub const REPORT_CSV: &str = "report.csv";

/// One line of `poses.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosesRecord {
    pub frame: usize,
    pub theta: Option<f64>,
    pub fallback: bool,
    pub selected: WirePerson,
    pub reconstructed: WirePerson,
    pub candidates: Vec<CandidateDiagnostic>,
}

impl From<&FrameResult> for PosesRecord {
    fn from(r: &FrameResult) -> Self {
        Self {
            frame: r.frame_index,
            theta: r.selected_theta,
            fallback: r.fallback_fired,
            selected: WirePerson::from_pose(&r.selected_pose),
            reconstructed: WirePerson::from_pose(&r.reconstructed_pose),
            candidates: r.candidates.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceRow {
    pub frame: usize,
    pub mean_conf_augmented: f64,
    pub mean_conf_raw: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub frame: usize,
    pub theta_deg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_secs: f64,
    pub mean_frame_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub schema: String,
    pub versions: BTreeMap<String, String>,
    pub frames: usize,
    pub estimator_calls: usize,
    /// θ = 0 calls made only for the raw confidence series.
    pub baseline_calls: usize,
    pub failed_calls: usize,
    pub fallback_frames: usize,
    pub timing: Timing,
}

impl Manifest {
    pub fn new(config: &RunConfig, schema: &SkeletonSchema, results: &[FrameResult], total_secs: f64) -> Self {
        let versions = BTreeMap::from([
            ("rotaug".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("format".to_string(), "1".to_string()),
        ]);
        Self {
            config: config.clone(),
            schema: schema.name().to_string(),
            versions,
            frames: results.len(),
            estimator_calls: results.iter().map(|r| r.estimator_calls).sum(),
            baseline_calls: results.iter().map(|r| r.baseline_calls).sum(),
            failed_calls: results.iter().map(|r| r.failures.len()).sum(),
            fallback_frames: results.iter().filter(|r| r.fallback_fired).count(),
            timing: Timing {
                total_secs,
                mean_frame_ms: if results.is_empty() {
                    0.0
                } else {
                    1e3 * total_secs / results.len() as f64
                },
            },
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| RunError::io(path, e))
}

fn write_jsonl<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), RunError> {
    let mut w = create(path)?;
    for row in rows {
        serde_json::to_writer(&mut w, &row).map_err(|e| RunError::format(path, e))?;
        w.write_all(b"\n").map_err(|e| RunError::io(path, e))?;
    }
    w.flush().map_err(|e| RunError::io(path, e))
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, RunError> {
    let file = File::open(path).map_err(|e| RunError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| RunError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| RunError::format(path, format!("line {}: {e}", i + 1)))?,
        );
    }
    Ok(out)
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for row in rows {
        w.serialize(row).map_err(|e| RunError::format(path, e))?;
    }
    w.flush().map_err(|e| RunError::io(path, e))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, RunError> {
    let file = File::open(path).map_err(|e| RunError::io(path, e))?;
    csv::Reader::from_reader(file)
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| RunError::format(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| RunError::format(path, e))?;
    w.write_all(b"\n").map_err(|e| RunError::io(path, e))?;
    w.flush().map_err(|e| RunError::io(path, e))
}

pub fn confidence_rows(results: &[FrameResult]) -> Vec<ConfidenceRow> {
    results
        .iter()
        .map(|r| ConfidenceRow {
            frame: r.frame_index,
            mean_conf_augmented: r.mean_conf_selected,
            mean_conf_raw: r.mean_conf_raw,
        })
        .collect()
}

pub fn theta_rows(results: &[FrameResult]) -> Vec<ThetaRow> {
    results
        .iter()
        .map(|r| ThetaRow {
            frame: r.frame_index,
            theta_deg: r.selected_theta,
        })
        .collect()
}

pub fn write_confidence_csv(path: &Path, rows: &[ConfidenceRow]) -> Result<(), RunError> {
    write_csv(path, rows)
}

pub fn write_theta_csv(path: &Path, rows: &[ThetaRow]) -> Result<(), RunError> {
    write_csv(path, rows)
}

/// Writes every run artifact into `dir`, creating it if needed.
pub fn write_run(dir: &Path, results: &[FrameResult], manifest: &Manifest) -> Result<(), RunError> {
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    write_jsonl(&dir.join(POSES_FILE), results.iter().map(PosesRecord::from))?;
    write_confidence_csv(&dir.join(CONFIDENCE_FILE), &confidence_rows(results))?;
    write_theta_csv(&dir.join(THETA_FILE), &theta_rows(results))?;
    write_json(&dir.join(MANIFEST_FILE), manifest)
}

pub fn read_poses(dir: &Path) -> Result<Vec<PosesRecord>, RunError> {
    read_jsonl(&dir.join(POSES_FILE))
}

pub fn read_confidence(dir: &Path) -> Result<Vec<ConfidenceRow>, RunError> {
    read_csv(&dir.join(CONFIDENCE_FILE))
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, RunError> {
    let path = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| RunError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| RunError::format(&path, e))
}

/// One line of `ground_truth.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthRecord {
    pub frame: usize,
    pub body_angle: f64,
    pub canvas: (u32, u32),
    #[serde(flatten)]
    pub person: WirePerson,
    /// Rendered frame, relative to the ground-truth file, when one was written.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<PathBuf>,
}

pub fn write_ground_truth(path: &Path, frames: &[SyntheticFrame], images: Option<&[PathBuf]>) -> Result<(), RunError> {
    write_jsonl(
        path,
        frames.iter().enumerate().map(|(i, f)| GroundTruthRecord {
            frame: i,
            body_angle: f.body_angle,
            canvas: f.canvas,
            person: WirePerson::from_pose(&f.gt),
            image: images.map(|imgs| imgs[i].clone()),
        }),
    )
}

pub fn read_ground_truth(path: &Path, schema: &SkeletonSchema) -> Result<Vec<SyntheticFrame>, RunError> {
    let records: Vec<GroundTruthRecord> = read_jsonl(path)?;
    if records.is_empty() {
        return Err(RunError::Usage(format!("{} holds no frames", path.display())));
    }
    records
        .iter()
        .map(|r| {
            Ok(SyntheticFrame {
                gt: r.person.to_pose(schema, CoordFrame::Original, r.frame)?,
                body_angle: r.body_angle,
                canvas: r.canvas,
            })
        })
        .collect()
}

/// Loads the series a report compares: a run directory, or a ground-truth
/// file standing in for a perfect run. `reconstructed` picks which pose of a
/// run is scored.
pub fn load_series(path: &Path, schema: &SkeletonSchema, reconstructed: bool) -> Result<RunSeries, RunError> {
    if path.is_file() {
        let gt = read_ground_truth(path, schema)?;
        let poses: Vec<Pose> = gt.into_iter().map(|f| f.gt).collect();
        return Ok(RunSeries {
            mean_conf: vec![1.0; poses.len()],
            poses,
            estimator_calls: 0,
        });
    }
    if !path.is_dir() {
        return Err(RunError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "run directory not found"),
        ));
    }
    let records = read_poses(path)?;
    let conf = read_confidence(path)?;
    if conf.len() != records.len() {
        return Err(RunError::format(
            path,
            format!("{} lists {} frames, {} lists {}", POSES_FILE, records.len(), CONFIDENCE_FILE, conf.len()),
        ));
    }
    let poses = records
        .iter()
        .map(|r| {
            let person = if reconstructed { &r.reconstructed } else { &r.selected };
            person.to_pose(schema, CoordFrame::Original, r.frame)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let estimator_calls = read_manifest(path).map_or(0, |m| m.estimator_calls);
    Ok(RunSeries {
        poses,
        mean_conf: conf.iter().map(|c| c.mean_conf_augmented).collect(),
        estimator_calls,
    })
}

#[derive(Debug, Clone, Serialize)]
struct ReportRow {
    frame: usize,
    error_augmented: Option<f64>,
    error_raw: Option<f64>,
    mean_conf_augmented: f64,
    mean_conf_raw: f64,
}

pub fn write_report(dir: &Path, report: &EvalReport) -> Result<(), RunError> {
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    write_json(&dir.join(REPORT_JSON), report)?;
    write_csv(
        &dir.join(REPORT_CSV),
        (0..report.frames).map(|i| ReportRow {
            frame: i,
            error_augmented: report.error_augmented[i],
            error_raw: report.error_raw[i],
            mean_conf_augmented: report.conf_augmented[i],
            mean_conf_raw: report.conf_raw[i],
        }),
    )
}

pub fn read_theta_from_poses(dir: &Path) -> Result<Vec<ThetaRow>, RunError> {
    Ok(read_poses(dir)?
        .into_iter()
        .map(|r| ThetaRow {
            frame: r.frame,
            theta_deg: r.theta,
        })
        .collect())
}
