//! Joint schema, pose container and confidence statistics.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Joint names of the 25-joint body layout, in index order.
pub const BODY25_JOINTS: [&str; 25] = [
    "nose",
    "neck",
    "right_shoulder",
    "right_elbow",
    "right_wrist",
    "left_shoulder",
    "left_elbow",
    "left_wrist",
    "mid_hip",
    "right_hip",
    "right_knee",
    "right_ankle",
    "left_hip",
    "left_knee",
    "left_ankle",
    "right_eye",
    "left_eye",
    "right_ear",
    "left_ear",
    "left_big_toe",
    "left_small_toe",
    "left_heel",
    "right_big_toe",
    "right_small_toe",
    "right_heel",
];

/// Nose, both eyes, both ears.
pub const BODY25_HEAD: [usize; 5] = [0, 15, 16, 17, 18];

pub const DEFAULT_CONFIDENCE_FLOOR: f64 = 0.05;

/// Named, ordered joint layout plus the set of head joints that selection ignores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemaDocument", into = "SchemaDocument")]
pub struct SkeletonSchema {
    name: String,
    joint_names: Vec<String>,
    head_joints: BTreeSet<usize>,
}

/// JSON shape of a schema definition: `{ "name", "joints", "head_joints" }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemaDocument {
    pub name: String,
    pub joints: Vec<String>,
    #[serde(default)]
    pub head_joints: Vec<usize>,
}

impl TryFrom<SchemaDocument> for SkeletonSchema {
    type Error = Error;

    fn try_from(doc: SchemaDocument) -> Result<Self> {
        SkeletonSchema::new(doc.name, doc.joints, doc.head_joints)
    }
}

impl From<SkeletonSchema> for SchemaDocument {
    fn from(s: SkeletonSchema) -> Self {
        SchemaDocument {
            name: s.name,
            joints: s.joint_names,
            head_joints: s.head_joints.into_iter().collect(),
        }
    }
}

impl SkeletonSchema {
    pub fn new(
        name: impl Into<String>,
        joint_names: Vec<String>,
        head_joints: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let k = joint_names.len();
        if k == 0 {
            return Err(Error::Schema("schema has no joints".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &joint_names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Schema(format!("duplicate joint name `{n}`")));
            }
        }
        let head_joints: BTreeSet<usize> = head_joints.into_iter().collect();
        if let Some(&bad) = head_joints.iter().find(|&&j| j >= k) {
            return Err(Error::Schema(format!(
                "head joint index {bad} out of range for {k} joints"
            )));
        }
        if head_joints.len() >= k {
            return Err(Error::Schema(
                "every joint is a head joint; at least one body joint must remain".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            joint_names,
            head_joints,
        })
    }

    /// The default 25-joint body layout with head = {nose, eyes, ears}.
    pub fn body25() -> Self {
        Self::new(
            "body_25",
            BODY25_JOINTS.iter().map(ToString::to_string).collect(),
            BODY25_HEAD,
        )
        .expect("body_25 layout is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn joint_names(&self) -> &[String] {
        &self.joint_names
    }

    /// Joint count K.
    pub fn len(&self) -> usize {
        self.joint_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joint_names.is_empty()
    }

    pub fn head_joints(&self) -> &BTreeSet<usize> {
        &self.head_joints
    }

    pub fn is_head(&self, k: usize) -> bool {
        self.head_joints.contains(&k)
    }

    pub fn joint_index(&self, name: &str) -> Option<usize> {
        self.joint_names.iter().position(|n| n == name)
    }

    /// Number of joints that selection may consider, before any confidence filtering.
    pub fn selectable_count(&self, exclude_head: bool) -> usize {
        if exclude_head {
            self.len() - self.head_joints.len()
        } else {
            self.len()
        }
    }

    pub fn check(&self, pose: &Pose) -> Result<()> {
        if pose.len() == self.len() {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "pose has {} keypoints, schema `{}` has {}",
                pose.len(),
                self.name,
                self.len()
            )))
        }
    }
}

/// One joint. `confidence == 0` means "not detected" and the position is meaningless.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub confidence: f64,
}

impl Keypoint {
    pub const UNDETECTED: Keypoint = Keypoint {
        x: 0.0,
        y: 0.0,
        confidence: 0.0,
    };

    pub fn new(x: f64, y: f64, confidence: f64) -> Self {
        Self { x, y, confidence }
    }

    pub fn is_detected(&self) -> bool {
        self.confidence > 0.0
    }
}

/// Coordinate frame a pose is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum CoordFrame {
    #[default]
    Original,
    /// Frame of the canvas rotated by this many degrees.
    Rotated(f64),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub keypoints: Vec<Keypoint>,
    pub frame: CoordFrame,
}

impl Pose {
    pub fn new(keypoints: Vec<Keypoint>, frame: CoordFrame) -> Self {
        Self { keypoints, frame }
    }

    /// A pose in the original frame with no detected joints.
    pub fn undetected(k: usize) -> Self {
        Self::new(vec![Keypoint::UNDETECTED; k], CoordFrame::Original)
    }

    pub fn len(&self) -> usize {
        self.keypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keypoints.is_empty()
    }

    pub fn any_detected(&self) -> bool {
        self.keypoints.iter().any(Keypoint::is_detected)
    }

    /// Every keypoint shifted by `(dx, dy)`, confidences untouched.
    #[must_use]
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            keypoints: self
                .keypoints
                .iter()
                .map(|k| Keypoint::new(k.x + dx, k.y + dy, k.confidence))
                .collect(),
            frame: self.frame,
        }
    }
}

/// `{ k : confidence_k > floor }`.
pub fn valid_joint_mask(pose: &Pose, floor: f64) -> BTreeSet<usize> {
    pose.keypoints
        .iter()
        .enumerate()
        .filter(|(_, kp)| kp.confidence > floor)
        .map(|(k, _)| k)
        .collect()
}

/// Whether joint `k` takes part in the selection objectives.
pub(crate) fn is_considered(
    schema: &SkeletonSchema,
    kp: &Keypoint,
    k: usize,
    floor: f64,
    exclude_head: bool,
) -> bool {
    kp.confidence > floor && !(exclude_head && schema.is_head(k))
}

/// Mean confidence over joints above `floor` (head joints skipped when
/// `exclude_head`); 0 when nothing is left.
pub fn mean_confidence(
    pose: &Pose,
    floor: f64,
    exclude_head: bool,
    schema: &SkeletonSchema,
) -> Result<f64> {
    schema.check(pose)?;
    let (sum, n) = pose
        .keypoints
        .iter()
        .enumerate()
        .filter(|&(k, kp)| is_considered(schema, kp, k, floor, exclude_head))
        .fold((0.0, 0usize), |(s, n), (_, kp)| (s + kp.confidence, n + 1));
    Ok(if n == 0 { 0.0 } else { sum / n as f64 })
}
