//! File-based bridge to external pose estimators.
//!
//! The adapter command template names an input image with `{input}` and the
//! wire JSON it must write with `{output}`. It runs through `sh -c`.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use rotaug_core::geometry::{rotate_raster, Raster, RotationSpec};
use rotaug_core::{CoordFrame, EstimatorBackend, Pose, SkeletonSchema};
use thiserror::Error;
use wait_timeout::ChildExt;

use crate::wire::{parse_wire_poses_in, WireError};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(120);

#[derive(Debug, Error)]
pub enum AdapterError {
    #[error("adapter failed to start: {0}")]
    Spawn(std::io::Error),
    #[error("adapter exited with {status}: {stderr}")]
    Backend { status: String, stderr: String },
    #[error("adapter timed out after {0:?}")]
    Timeout(Duration),
    #[error("adapter output {path}: {message}")]
    Protocol { path: PathBuf, message: String },
    #[error("intermediate image {path}: {message}")]
    Image { path: PathBuf, message: String },
}

/// Quotes `s` for a POSIX shell.
fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

#[derive(Debug, Clone)]
pub struct ExternalAdapter {
    pub template: String,
    pub timeout: Duration,
}

impl ExternalAdapter {
    pub fn new(template: impl Into<String>) -> Self {
        Self {
            template: template.into(),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    #[must_use]
    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn command_line(&self, input: &Path, output: &Path) -> String {
        self.template
            .replace("{input}", &shell_quote(&input.to_string_lossy()))
            .replace("{output}", &shell_quote(&output.to_string_lossy()))
    }

    /// Runs the adapter on one image and parses what it wrote to `output`.
    pub fn estimate(
        &self,
        input: &Path,
        output: &Path,
        schema: &SkeletonSchema,
        frame: CoordFrame,
    ) -> Result<Vec<Pose>, AdapterError> {
        // a stale file from an earlier run must not pass for fresh output
        let _ = std::fs::remove_file(output);
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(self.command_line(input, output))
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(AdapterError::Spawn)?;
        let mut stderr_pipe = child.stderr.take().expect("stderr is piped");
        let drain = std::thread::spawn(move || {
            let mut buf = Vec::new();
            let _ = stderr_pipe.read_to_end(&mut buf);
            buf
        });
        let status = match child.wait_timeout(self.timeout).map_err(AdapterError::Spawn)? {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(AdapterError::Timeout(self.timeout));
            }
        };
        let stderr = String::from_utf8_lossy(&drain.join().unwrap_or_default())
            .trim()
            .to_string();
        if !status.success() {
            return Err(AdapterError::Backend {
                status: status.to_string(),
                stderr,
            });
        }
        let bytes = std::fs::read(output).map_err(|e| AdapterError::Protocol {
            path: output.to_path_buf(),
            message: format!("not readable: {e}"),
        })?;
        parse_wire_poses_in(&bytes, schema, frame).map_err(|e: WireError| AdapterError::Protocol {
            path: output.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// A decoded input frame.
#[derive(Debug, Clone)]
pub struct ImageFrame {
    pub path: PathBuf,
    pub raster: Raster,
}

impl ImageFrame {
    pub fn load(path: &Path) -> Result<Self, AdapterError> {
        let img = image::open(path)
            .map_err(|e| AdapterError::Image {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?
            .to_rgb8();
        let (w, h) = img.dimensions();
        let raster = Raster::from_raw(w, h, 3, img.into_raw()).map_err(|e| AdapterError::Image {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(Self {
            path: path.to_path_buf(),
            raster,
        })
    }
}

pub fn save_raster(raster: &Raster, path: &Path) -> Result<(), AdapterError> {
    let err = |message: String| AdapterError::Image {
        path: path.to_path_buf(),
        message,
    };
    let buf = match raster.channels {
        3 => raster.data.clone(),
        1 => raster.data.iter().flat_map(|&v| [v, v, v]).collect(),
        c => return Err(err(format!("unsupported channel count {c}"))),
    };
    image::RgbImage::from_raw(raster.width, raster.height, buf)
        .ok_or_else(|| err("buffer does not match dimensions".into()))?
        .save(path)
        .map_err(|e| err(e.to_string()))
}

/// Backend that rotates each frame to a temporary image and hands it to an
/// [`ExternalAdapter`].
#[derive(Debug, Clone)]
pub struct ExternalBackend {
    pub adapter: ExternalAdapter,
    pub schema: SkeletonSchema,
    pub workdir: PathBuf,
    pub keep_intermediates: bool,
}

impl ExternalBackend {
    fn run(&self, frame: &ImageFrame, frame_index: usize, spec: &RotationSpec) -> Result<Vec<Pose>, AdapterError> {
        let stem = format!("frame{frame_index:06}_theta{:06.2}", spec.theta);
        let output = self.workdir.join(format!("{stem}.json"));
        let rotated = (spec.theta != 0.0).then(|| self.workdir.join(format!("{stem}.png")));
        let input = match &rotated {
            Some(path) => {
                let raster = rotate_raster(&frame.raster, spec).map_err(|e| AdapterError::Image {
                    path: frame.path.clone(),
                    message: e.to_string(),
                })?;
                save_raster(&raster, path)?;
                path.as_path()
            }
            None => frame.path.as_path(),
        };
        let result = self
            .adapter
            .estimate(input, &output, &self.schema, CoordFrame::Rotated(spec.theta));
        if !self.keep_intermediates {
            let _ = std::fs::remove_file(&output);
            if let Some(p) = &rotated {
                let _ = std::fs::remove_file(p);
            }
        }
        result
    }
}

impl EstimatorBackend for ExternalBackend {
    type Frame = ImageFrame;

    fn frame_size(&self, frame: &ImageFrame) -> (u32, u32) {
        (frame.raster.width, frame.raster.height)
    }

    fn estimate(&self, frame: &ImageFrame, frame_index: usize, spec: &RotationSpec) -> rotaug_core::Result<Vec<Pose>> {
        self.run(frame, frame_index, spec)
            .map_err(|e| rotaug_core::Error::Backend(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_survives_spaces_and_quotes() {
        let a = ExternalAdapter::new("tool --in {input} --out {output}");
        let line = a.command_line(Path::new("/tmp/my frame's.png"), Path::new("/o.json"));
        assert_eq!(line, r"tool --in '/tmp/my frame'\''s.png' --out '/o.json'");
    }
}
