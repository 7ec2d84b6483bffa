//! The flat `[x, y, confidence] × K` JSON person encoding shared with
//! estimator adapters.
//!
//! ```json
//! { "people": [ { "pose_keypoints_2d": [x0, y0, c0, x1, y1, c1, ...] } ] }
//! ```
//!
//! Unknown keys (`version`, `face_keypoints_2d`, ...) are ignored on input.

use rotaug_core::{CoordFrame, Keypoint, Pose, SkeletonSchema};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("malformed pose JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("person {person}: {message}")]
    Schema { person: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WirePerson {
    pub pose_keypoints_2d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireDocument {
    pub people: Vec<WirePerson>,
}

impl WirePerson {
    pub fn from_pose(pose: &Pose) -> Self {
        Self {
            pose_keypoints_2d: pose
                .keypoints
                .iter()
                .flat_map(|k| [k.x, k.y, k.confidence])
                .collect(),
        }
    }

    /// Decodes into a pose tagged with `frame`; `person` only labels errors.
    pub fn to_pose(&self, schema: &SkeletonSchema, frame: CoordFrame, person: usize) -> Result<Pose, WireError> {
        let flat = &self.pose_keypoints_2d;
        let k = schema.len();
        if flat.len() != 3 * k {
            return Err(WireError::Schema {
                person,
                message: format!(
                    "pose_keypoints_2d has {} values, schema `{}` needs {}",
                    flat.len(),
                    schema.name(),
                    3 * k
                ),
            });
        }
        let keypoints = flat
            .chunks_exact(3)
            .enumerate()
            .map(|(j, t)| {
                let (x, y, c) = (t[0], t[1], t[2]);
                if !(0.0..=1.0).contains(&c) || !x.is_finite() || !y.is_finite() {
                    return Err(WireError::Schema {
                        person,
                        message: format!("joint {j} has invalid triplet [{x}, {y}, {c}]"),
                    });
                }
                Ok(Keypoint::new(x, y, c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Pose::new(keypoints, frame))
    }
}

/// Parses a wire document into poses in the original frame.
pub fn parse_wire_poses(document: &[u8], schema: &SkeletonSchema) -> Result<Vec<Pose>, WireError> {
    parse_wire_poses_in(document, schema, CoordFrame::Original)
}

/// Parses a wire document, tagging every pose with `frame`.
pub fn parse_wire_poses_in(
    document: &[u8],
    schema: &SkeletonSchema,
    frame: CoordFrame,
) -> Result<Vec<Pose>, WireError> {
    let doc: WireDocument = serde_json::from_slice(document)?;
    doc.people
        .iter()
        .enumerate()
        .map(|(i, p)| p.to_pose(schema, frame, i))
        .collect()
}

pub fn serialize_wire_poses(poses: &[Pose]) -> Vec<u8> {
    let doc = WireDocument {
        people: poses.iter().map(WirePerson::from_pose).collect(),
    };
    serde_json::to_vec(&doc).expect("wire document is always serialisable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_joints() -> SkeletonSchema {
        SkeletonSchema::new("pair", vec!["a".into(), "b".into()], []).unwrap()
    }

    #[test]
    fn empty_people() {
        assert!(parse_wire_poses(br#"{"people":[]}"#, &two_joints()).unwrap().is_empty());
    }

    #[test]
    fn one_person_field_mapping() {
        let doc = br#"{"people":[{"pose_keypoints_2d":[1.0,2.0,0.9,0.0,0.0,0.0]}]}"#;
        let poses = parse_wire_poses(doc, &two_joints()).unwrap();
        assert_eq!(poses.len(), 1);
        assert_eq!(poses[0].keypoints[0], Keypoint::new(1.0, 2.0, 0.9));
        assert!(!poses[0].keypoints[1].is_detected());
    }

    #[test]
    fn ignores_unknown_keys() {
        let doc = br#"{"version":1.3,"people":[{"person_id":[-1],"pose_keypoints_2d":[1,2,0.5,3,4,0.25],"face_keypoints_2d":[]}]}"#;
        let poses = parse_wire_poses(doc, &two_joints()).unwrap();
        assert_eq!(poses[0].keypoints[1], Keypoint::new(3.0, 4.0, 0.25));
    }

    #[test]
    fn errors_name_the_person() {
        assert!(matches!(
            parse_wire_poses(b"{not json", &two_joints()),
            Err(WireError::Parse(_))
        ));
        let doc = br#"{"people":[{"pose_keypoints_2d":[1,2,0.5,3,4,0.25]},{"pose_keypoints_2d":[1,2,0.5]}]}"#;
        match parse_wire_poses(doc, &two_joints()) {
            Err(WireError::Schema { person, message }) => {
                assert_eq!(person, 1);
                assert!(message.contains('3') && message.contains('6'), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let doc = br#"{"people":[{"pose_keypoints_2d":[1,2,1.5,3,4,0.25]}]}"#;
        assert!(matches!(
            parse_wire_poses(doc, &two_joints()),
            Err(WireError::Schema { person: 0, .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(people in proptest::collection::vec(
            proptest::collection::vec((-1e4f64..1e4, -1e4f64..1e4, 0.0f64..=1.0), 25), 0..4)) {
            let schema = SkeletonSchema::body25();
            let poses: Vec<Pose> = people
                .iter()
                .map(|p| Pose::new(p.iter().map(|&(x, y, c)| Keypoint::new(x, y, c)).collect(), CoordFrame::Original))
                .collect();
            let bytes = serialize_wire_poses(&poses);
            prop_assert_eq!(parse_wire_poses(&bytes, &schema).unwrap(), poses);
        }
    }
}
