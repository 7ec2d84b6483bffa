use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Pose or schema shapes do not line up.
    #[error("structural error: {0}")]
    Structural(String),
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no candidates to select from")]
    NoCandidate,
    #[error("backend error: {0}")]
    Backend(String),
    #[error("all {calls} estimator calls failed for frame {frame}; first: {first}")]
    FrameFailed { frame: usize, calls: usize, first: String },
    #[error("generation error: {0}")]
    Generation(String),
    #[error("usage error: {0}")]
    Usage(String),
}
