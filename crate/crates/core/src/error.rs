use thiserror::Error;

use crate::numerics::TracedRay;

/// Errors returned across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid degree {0}: must be at least 2")]
    InvalidDegree(u32),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("leaf {0} is not the root of a primitive component")]
    NotPrimitive(String),
    /// The step size underflowed before reaching the target potential.
    /// The points accepted so far are kept.
    #[error("trace stalled at potential {potential:e}")]
    TraceStalled { potential: f64, partial: Box<TracedRay> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("cache mismatch: {0}")]
    CacheMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
