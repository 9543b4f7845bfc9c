use thiserror::Error;

use crate::geometry::PointN;

pub type Result<T, E = JointsError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JointsError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("lines {0} and {1} are the same geometric line")]
    IdenticalLines(u64, u64),

    #[error("duplicate line id {0}")]
    DuplicateLineId(u64),

    #[error("empty input")]
    EmptyInput,

    #[error("joint set is empty")]
    EmptyJointSet,

    #[error("point {0} is not a joint of the arrangement")]
    NotAJoint(PointN),

    #[error("precondition violated on line {line}: {reason}")]
    LinePrecondition { line: u64, reason: String },

    #[error("precondition violated at point {point}: {reason}")]
    PointPrecondition { point: PointN, reason: String },

    #[error("contradiction detected: {0}")]
    ContradictionDetected(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("trace verification failed at step {step}: {reason}")]
    VerificationFailed { step: usize, reason: String },

    #[error("joint {0} lies on no removed line")]
    UncoveredJoint(PointN),

    #[error("curve is singular at t = {0}")]
    SingularPoint(String),

    #[error("unknown curve id {0}")]
    UnknownCurveId(u64),

    #[error("certificate at {0} does not verify")]
    UnverifiedCertificate(PointN),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("{0}")]
    Invalid(String),
}
