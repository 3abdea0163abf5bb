use thiserror::Error;

use crate::quantum::{JointBasisLabel, StageTag};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("stage mismatch: expected {expected}, found {found}")]
    StageMismatch { expected: StageTag, found: StageTag },

    #[error("label {label} is not valid at stage {stage}")]
    LabelOutsideStage { label: JointBasisLabel, stage: StageTag },

    #[error("label {label} is outside the domain of isometry {isometry}")]
    LabelOutsideDomain { label: JointBasisLabel, isometry: String },

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("conditioning on {projector} is impossible (probability {probability:e})")]
    ZeroProbability { projector: String, probability: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("post-selection is impossible: total weight {0:e}")]
    ImpossiblePostselection(f64),

    #[error("boost velocity must satisfy |beta| < 1, got {0}")]
    InvalidBoost(f64),

    #[error("non-finite coordinate in event ({t}, {z})")]
    NonFiniteEvent { t: f64, z: f64 },

    #[error("missing named event `{0}`")]
    MissingEvent(String),

    #[error("dimension {0} is outside the supported range 2..=10")]
    DimensionOutOfRange(usize),

    #[error("contradictory claims for {0}")]
    ContradictoryClaims(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("isometry {name} has non-orthonormal columns (max deviation {deviation:e})")]
    NotIsometry { name: String, deviation: f64 },

    #[error("norm not preserved: squared norm changed from {before} to {after}")]
    NormNotPreserved { before: f64, after: f64 },

    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures that indicate a bug in an engine rather than bad input.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(
            self,
            Error::NotIsometry { .. } | Error::NormNotPreserved { .. } | Error::Invariant(_)
        )
    }
}
