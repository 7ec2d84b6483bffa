//! Exponential blend of selected poses into the output trajectory.

use alloc::format;

use crate::error::{Error, Result};
use crate::skeleton::{CoordFrame, Keypoint, Pose};

pub const DEFAULT_WEIGHT: f64 = 0.8;

/// Smoothing state for one video stream.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionState {
    pub previous: Option<Pose>,
    /// Weight of the current frame, in `(0, 1]`.
    w: f64,
    /// Keep joints missing from the selection alive at the previous position,
    /// with confidence decayed by `1 − w`.
    coasting: bool,
}

impl Default for ReconstructionState {
    fn default() -> Self {
        Self {
            previous: None,
            w: DEFAULT_WEIGHT,
            coasting: true,
        }
    }
}

impl ReconstructionState {
    pub fn new(w: f64, coasting: bool) -> Result<Self> {
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::Config(format!("weight {w} must be in (0, 1]")));
        }
        Ok(Self {
            previous: None,
            w,
            coasting,
        })
    }

    pub fn weight(&self) -> f64 {
        self.w
    }

    pub fn coasting(&self) -> bool {
        self.coasting
    }

    /// Blends `selected` into the state and returns the new reconstructed pose.
    pub fn reconstruct(&mut self, selected: &Pose) -> Result<Pose> {
        if selected.frame != CoordFrame::Original {
            return Err(Error::Structural(
                "selected pose must be in the original frame".into(),
            ));
        }
        let out = match &self.previous {
            None => selected.clone(),
            Some(prev) => {
                if prev.len() != selected.len() {
                    return Err(Error::Structural(format!(
                        "selected pose has {} joints, previous has {}",
                        selected.len(),
                        prev.len()
                    )));
                }
                let w = self.w;
                let keypoints = selected
                    .keypoints
                    .iter()
                    .zip(&prev.keypoints)
                    .map(|(cur, old)| match (cur.is_detected(), old.is_detected()) {
                        (true, true) => Keypoint::new(
                            w * cur.x + (1.0 - w) * old.x,
                            w * cur.y + (1.0 - w) * old.y,
                            cur.confidence,
                        ),
                        (true, false) => *cur,
                        (false, true) if self.coasting => {
                            Keypoint::new(old.x, old.y, old.confidence * (1.0 - w))
                        }
                        _ => Keypoint::UNDETECTED,
                    })
                    .collect();
                Pose::new(keypoints, CoordFrame::Original)
            }
        };
        self.previous = Some(out.clone());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn pose(points: &[(f64, f64, f64)]) -> Pose {
        Pose::new(
            points.iter().map(|&(x, y, c)| Keypoint::new(x, y, c)).collect(),
            CoordFrame::Original,
        )
    }

    #[test]
    fn first_frame_copies_selection() {
        let mut st = ReconstructionState::default();
        let p = pose(&[(1.0, 2.0, 0.5), (0.0, 0.0, 0.0)]);
        assert_eq!(st.reconstruct(&p).unwrap(), p);
        assert_eq!(st.previous.as_ref(), Some(&p));
    }

    #[test]
    fn blend_example() {
        let mut st = ReconstructionState::default();
        st.reconstruct(&pose(&[(0.0, 0.0, 0.9)])).unwrap();
        let out = st.reconstruct(&pose(&[(10.0, 10.0, 0.6)])).unwrap();
        assert!((out.keypoints[0].x - 8.0).abs() < 1e-12);
        assert!((out.keypoints[0].y - 8.0).abs() < 1e-12);
        assert_eq!(out.keypoints[0].confidence, 0.6);
    }

    #[test]
    fn fixed_point() {
        let p = pose(&[(3.0, 4.0, 0.9), (5.0, 6.0, 0.8)]);
        let mut st = ReconstructionState::default();
        st.reconstruct(&p).unwrap();
        assert_eq!(st.reconstruct(&p).unwrap(), p);
    }

    #[test]
    fn detection_cases() {
        let mut st = ReconstructionState::default();
        st.reconstruct(&pose(&[(0.0, 0.0, 1.0), (0.0, 0.0, 0.0), (4.0, 4.0, 0.5), (0.0, 0.0, 0.0)]))
            .unwrap();
        let out = st
            .reconstruct(&pose(&[(5.0, 0.0, 1.0), (7.0, 7.0, 0.7), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0)]))
            .unwrap();
        assert_eq!(out.keypoints[1], Keypoint::new(7.0, 7.0, 0.7));
        assert_eq!(out.keypoints[2].x, 4.0);
        assert!((out.keypoints[2].confidence - 0.1).abs() < 1e-12);
        assert_eq!(out.keypoints[3], Keypoint::UNDETECTED);

        let mut strict = ReconstructionState::new(0.8, false).unwrap();
        strict.reconstruct(&pose(&[(4.0, 4.0, 0.5)])).unwrap();
        let out = strict.reconstruct(&pose(&[(0.0, 0.0, 0.0)])).unwrap();
        assert_eq!(out.keypoints[0], Keypoint::UNDETECTED);
    }

    #[test]
    fn errors() {
        assert!(ReconstructionState::new(0.0, true).is_err());
        assert!(ReconstructionState::new(1.5, true).is_err());
        let mut st = ReconstructionState::default();
        st.reconstruct(&pose(&[(0.0, 0.0, 1.0)])).unwrap();
        assert!(st.reconstruct(&pose(&[(0.0, 0.0, 1.0); 2])).is_err());
        let rotated = Pose::new(vec![Keypoint::new(0.0, 0.0, 1.0)], CoordFrame::Rotated(10.0));
        assert!(st.reconstruct(&rotated).is_err());
    }

    #[test]
    fn geometric_convergence() {
        let target = pose(&[(100.0, 50.0, 0.9), (-20.0, 30.0, 0.9)]);
        let start = pose(&[(0.0, 0.0, 0.9), (80.0, -40.0, 0.9)]);
        let mut st = ReconstructionState::default();
        st.reconstruct(&start).unwrap();
        let err = |p: &Pose| -> Vec<f64> {
            p.keypoints
                .iter()
                .zip(&target.keypoints)
                .map(|(a, b)| libm::hypot(a.x - b.x, a.y - b.y))
                .collect()
        };
        let initial = err(&start);
        for n in 1..=20 {
            let out = st.reconstruct(&target).unwrap();
            for (e, e0) in err(&out).iter().zip(&initial) {
                let closed_form = e0 * libm::pow(0.2, f64::from(n));
                assert!((e - closed_form).abs() <= 1e-9 * e0, "n={n}: {e} vs {closed_form}");
            }
        }
    }

    proptest! {
        #[test]
        fn convex_blend(px in -1e3f64..1e3, py in -1e3f64..1e3, cx in -1e3f64..1e3, cy in -1e3f64..1e3, w in 0.01f64..=1.0) {
            let mut st = ReconstructionState::new(w, true).unwrap();
            st.reconstruct(&pose(&[(px, py, 1.0)])).unwrap();
            let out = st.reconstruct(&pose(&[(cx, cy, 1.0)])).unwrap().keypoints[0];
            let eps = 1e-9;
            prop_assert!(out.x >= px.min(cx) - eps && out.x <= px.max(cx) + eps);
            prop_assert!(out.y >= py.min(cy) - eps && out.y <= py.max(cy) + eps);
        }

        #[test]
        fn unit_weight_passes_through(px in -1e3f64..1e3, cx in -1e3f64..1e3) {
            let mut st = ReconstructionState::new(1.0, true).unwrap();
            st.reconstruct(&pose(&[(px, px, 1.0)])).unwrap();
            let sel = pose(&[(cx, -cx, 0.4)]);
            prop_assert_eq!(st.reconstruct(&sel).unwrap(), sel);
        }

        #[test]
        fn translation_equivariant(px in -1e3f64..1e3, py in -1e3f64..1e3, cx in -1e3f64..1e3, cy in -1e3f64..1e3,
                                   vx in -1e3f64..1e3, vy in -1e3f64..1e3) {
            let prev = pose(&[(px, py, 1.0), (py, px, 0.5)]);
            let cur = pose(&[(cx, cy, 0.9), (0.0, 0.0, 0.0)]);
            let mut a = ReconstructionState::default();
            a.reconstruct(&prev).unwrap();
            let out_a = a.reconstruct(&cur).unwrap();
            let mut b = ReconstructionState::default();
            b.reconstruct(&prev.translated(vx, vy)).unwrap();
            let out_b = b.reconstruct(&cur.translated(vx, vy)).unwrap();
            for (ka, kb) in out_a.translated(vx, vy).keypoints.iter().zip(&out_b.keypoints) {
                if ka.is_detected() {
                    prop_assert!((ka.x - kb.x).abs() < 1e-9 && (ka.y - kb.y).abs() < 1e-9);
                }
                prop_assert_eq!(ka.confidence, kb.confidence);
            }
        }
    }
}
