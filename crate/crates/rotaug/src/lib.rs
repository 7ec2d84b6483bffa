//! IO side of the rotation-augmentation pipeline.
//!
//! The algorithms live in [`rotaug_core`]. This crate adds the estimator wire
//! format, the external-command adapter, the parallel frame runner, the run
//! artifacts and the `rotaug` command line.

pub mod adapter;
pub mod artifacts;
pub mod cli;
pub mod config;
pub mod error;
pub mod frames;
pub mod runner;
pub mod wire;

pub use error::RunError;
pub use rotaug_core as core;
