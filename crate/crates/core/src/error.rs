//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An interval comparison stayed undecided after the refinement cap.
    /// Returned instead of guessing; callers may retry with a higher cap.
    #[error("indeterminate comparison: {0}")]
    Indeterminate(String),

    /// A mathematical invariant that should be unconditionally true failed.
    /// Always indicates a bug, never bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// A configured cost cap was exceeded.
    #[error("cap exceeded: {0}")]
    Cap(String),

    /// Underlying I/O failure (caches, checkpoints, stats files).
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A persisted file failed validation (bad magic, version, layout).
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
