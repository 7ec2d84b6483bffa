//! Mapping between the original image frame and rotated, expanded canvases.
//!
//! All coordinates are image coordinates: x to the right, y down. A rotation by
//! θ applies `R(θ) = [[cos θ, −sin θ], [sin θ, cos θ]]` to `(x, y)` about the
//! image center, so with y pointing down a positive θ turns content clockwise
//! on screen. The canvas grows so that no source pixel is cropped.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::skeleton::{CoordFrame, Keypoint, Pose};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

/// Wraps any angle in degrees to `[0, 360)`.
pub fn normalize_deg(theta: f64) -> f64 {
    let r = theta % 360.0;
    let r = if r < 0.0 { r + 360.0 } else { r };
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// Wraps any angle in degrees to `(−180, 180]`.
pub fn wrap_signed_deg(theta: f64) -> f64 {
    let r = normalize_deg(theta);
    if r > 180.0 {
        r - 360.0
    } else {
        r
    }
}

/// Shortest distance between two angles on the circle, in `[0, 180]`.
pub fn circular_distance_deg(a: f64, b: f64) -> f64 {
    wrap_signed_deg(a - b).abs()
}

/// `(sin θ, cos θ)` for θ in degrees, exact at multiples of 90°.
pub fn sin_cos_deg(theta: f64) -> (f64, f64) {
    let t = normalize_deg(theta);
    if t == 0.0 {
        (0.0, 1.0)
    } else if t == 90.0 {
        (1.0, 0.0)
    } else if t == 180.0 {
        (0.0, -1.0)
    } else if t == 270.0 {
        (-1.0, 0.0)
    } else {
        libm::sincos(t.to_radians())
    }
}

/// Applies `R(θ)` to a vector.
pub fn rotate_vec(v: Point, theta: f64) -> Point {
    let (s, c) = sin_cos_deg(theta);
    Point::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// One rotation of a `W×H` source onto its expanded canvas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub theta: f64,
    pub source_size: (u32, u32),
    pub canvas_size: (u32, u32),
    pub center_src: Point,
    pub center_dst: Point,
}

impl RotationSpec {
    pub fn new(theta: f64, width: u32, height: u32) -> Self {
        let theta = normalize_deg(theta);
        let (s, c) = sin_cos_deg(theta);
        let (w, h) = (f64::from(width), f64::from(height));
        // tolerate float noise like 99.99999999999999 so exact sizes do not round up
        let fit = |v: f64| libm::ceil(v - 1e-9).max(1.0) as u32;
        let cw = fit(w * c.abs() + h * s.abs());
        let ch = fit(w * s.abs() + h * c.abs());
        Self {
            theta,
            source_size: (width, height),
            canvas_size: (cw, ch),
            center_src: Point::new((w - 1.0) / 2.0, (h - 1.0) / 2.0),
            center_dst: Point::new((f64::from(cw) - 1.0) / 2.0, (f64::from(ch) - 1.0) / 2.0),
        }
    }

    /// Original frame → rotated canvas.
    pub fn forward_map(&self, p: Point) -> Point {
        let r = rotate_vec(
            Point::new(p.x - self.center_src.x, p.y - self.center_src.y),
            self.theta,
        );
        Point::new(r.x + self.center_dst.x, r.y + self.center_dst.y)
    }

    /// Rotated canvas → original frame; the exact inverse of [`forward_map`](Self::forward_map).
    pub fn inverse_map(&self, p: Point) -> Point {
        let r = rotate_vec(
            Point::new(p.x - self.center_dst.x, p.y - self.center_dst.y),
            -self.theta,
        );
        Point::new(r.x + self.center_src.x, r.y + self.center_src.y)
    }

    fn map_pose(pose: &Pose, to: CoordFrame, f: impl Fn(Point) -> Point) -> Pose {
        let keypoints = pose
            .keypoints
            .iter()
            .map(|kp| {
                if kp.is_detected() {
                    let q = f(Point::new(kp.x, kp.y));
                    Keypoint::new(q.x, q.y, kp.confidence)
                } else {
                    *kp
                }
            })
            .collect();
        Pose::new(keypoints, to)
    }

    /// Maps a pose predicted on this canvas back to the original frame.
    pub fn unrotate_pose(&self, pose: &Pose) -> Result<Pose> {
        match pose.frame {
            CoordFrame::Rotated(t) if circular_distance_deg(t, self.theta) < 1e-9 => {
                Ok(Self::map_pose(pose, CoordFrame::Original, |p| self.inverse_map(p)))
            }
            other => Err(Error::Structural(format!(
                "expected a pose in rotated({}) frame, got {other:?}",
                self.theta
            ))),
        }
    }

    /// Maps an original-frame pose onto this canvas.
    pub fn rotate_pose(&self, pose: &Pose) -> Result<Pose> {
        if pose.frame != CoordFrame::Original {
            return Err(Error::Structural(format!(
                "expected a pose in the original frame, got {:?}",
                pose.frame
            )));
        }
        Ok(Self::map_pose(pose, CoordFrame::Rotated(self.theta), |p| {
            self.forward_map(p)
        }))
    }
}

/// Rotations `[0, d, 2d, …, 360 − d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleGrid {
    step: f64,
    angles: Vec<f64>,
}

impl AngleGrid {
    pub fn new(step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0 && step <= 360.0) {
            return Err(Error::Config(format!("angle step {step} must be in (0, 360]")));
        }
        let n = libm::round(360.0 / step);
        if (n * step - 360.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "angle step {step} does not divide 360"
            )));
        }
        let angles = (0..n as usize).map(|i| i as f64 * step).collect();
        Ok(Self { step, angles })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Interleaved 8-bit raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    pub data: Vec<u8>,
}

impl Raster {
    pub fn new(width: u32, height: u32, channels: u8) -> Self {
        Self {
            width,
            height,
            channels,
            data: vec![0; width as usize * height as usize * channels as usize],
        }
    }

    pub fn from_raw(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self> {
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(Error::Structural(format!(
                "raster buffer has {} bytes, expected {expected}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * self.channels as usize
    }

    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        let o = self.offset(x, y);
        &self.data[o..o + self.channels as usize]
    }

    pub fn pixel_mut(&mut self, x: u32, y: u32) -> &mut [u8] {
        let o = self.offset(x, y);
        let c = self.channels as usize;
        &mut self.data[o..o + c]
    }

    /// Sets every channel of pixel `(x, y)` if it lies inside the raster.
    pub fn put(&mut self, x: i64, y: i64, value: u8) {
        if x >= 0 && y >= 0 && x < i64::from(self.width) && y < i64::from(self.height) {
            self.pixel_mut(x as u32, y as u32).fill(value);
        }
    }
}

/// Rotates `image` onto the expanded canvas of `spec` with bilinear sampling
/// and black fill.
pub fn rotate_raster(image: &Raster, spec: &RotationSpec) -> Result<Raster> {
    if image.width == 0 || image.height == 0 || image.channels == 0 {
        return Err(Error::Structural("cannot rotate an empty raster".into()));
    }
    if spec.source_size != (image.width, image.height) {
        return Err(Error::Structural(format!(
            "rotation spec is for {:?}, raster is {}x{}",
            spec.source_size, image.width, image.height
        )));
    }
    let (cw, ch) = spec.canvas_size;
    let mut out = Raster::new(cw, ch, image.channels);
    let max_x = f64::from(image.width - 1);
    let max_y = f64::from(image.height - 1);
    const EPS: f64 = 1e-9;
    let nc = image.channels as usize;
    let mut acc = vec![0.0f64; nc];
    for y in 0..ch {
        for x in 0..cw {
            let p = spec.inverse_map(Point::new(f64::from(x), f64::from(y)));
            if p.x < -EPS || p.y < -EPS || p.x > max_x + EPS || p.y > max_y + EPS {
                continue;
            }
            let px = p.x.clamp(0.0, max_x);
            let py = p.y.clamp(0.0, max_y);
            let x0 = libm::floor(px) as u32;
            let y0 = libm::floor(py) as u32;
            let x1 = (x0 + 1).min(image.width - 1);
            let y1 = (y0 + 1).min(image.height - 1);
            let fx = px - f64::from(x0);
            let fy = py - f64::from(y0);
            acc.fill(0.0);
            for (xx, yy, wgt) in [
                (x0, y0, (1.0 - fx) * (1.0 - fy)),
                (x1, y0, fx * (1.0 - fy)),
                (x0, y1, (1.0 - fx) * fy),
                (x1, y1, fx * fy),
            ] {
                if wgt == 0.0 {
                    continue;
                }
                for (a, &v) in acc.iter_mut().zip(image.pixel(xx, yy)) {
                    *a += wgt * f64::from(v);
                }
            }
            for (o, a) in out.pixel_mut(x, y).iter_mut().zip(&acc) {
                *o = libm::round(*a).clamp(0.0, 255.0) as u8;
            }
        }
    }
    Ok(out)
}
