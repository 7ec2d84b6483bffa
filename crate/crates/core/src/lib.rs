//! Rotation test-time augmentation for single-person 2D pose sequences.
//!
//! A keypoint estimator is run on every frame at a grid of rotations. Each
//! prediction is mapped back to the original image frame, the candidate that is
//! most consistent with the previous reconstructed pose is selected, and the
//! selections are smoothed into the final trajectory.
//!
//! This crate is `no_std` (with `alloc`) and holds no IO. The `rotaug` crate
//! carries the wire format, external estimator adapters, the parallel runner
//! and the command line.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(clippy::pedantic)]
#![allow(
    clippy::must_use_candidate,
    clippy::missing_errors_doc,
    clippy::missing_panics_doc,
    clippy::cast_precision_loss,
    clippy::cast_possible_truncation,
    clippy::cast_sign_loss,
    clippy::module_name_repetitions,
    clippy::similar_names,
    clippy::cast_possible_wrap,
    clippy::float_cmp,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::many_single_char_names,
    clippy::items_after_statements
)]

extern crate alloc;

pub mod error;
pub mod estimator;
pub mod eval;
pub mod geometry;
pub mod pipeline;
pub mod reconstructor;
pub mod selector;
pub mod skeleton;

pub use error::{Error, Result};
pub use estimator::{EstimatorBackend, SyntheticBackend, SyntheticEstimatorModel, SyntheticFrame};
pub use geometry::{AngleGrid, Point, Raster, RotationSpec};
pub use pipeline::{FrameResult, PipelineConfig, PipelineState};
pub use reconstructor::ReconstructionState;
pub use selector::{RotationCandidate, SelectionDiagnostics, SelectorConfig};
pub use skeleton::{CoordFrame, Keypoint, Pose, SkeletonSchema};
