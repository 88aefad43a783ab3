use thiserror::Error;

/// Errors reported by the library.
///
/// Out-of-tolerance inputs are rejected rather than silently renormalized,
/// so a malformed value always surfaces at the call that received it.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point violates the unit relation x^2 + y^2 = 1 (defect {defect:.3e})")]
    MalformedCirclePoint { defect: f64 },

    #[error("map violates the determinant relation |u|^2 + |v|^2 = 1 (defect {defect:.3e})")]
    MalformedMoebiusMap { defect: f64 },

    #[error("section is not sigma-invariant (defect {defect:.3e})")]
    NotInvariant { defect: f64 },

    #[error("section does not vanish at the given point (|value| = {value_norm:.3e})")]
    NonVanishingSection { value_norm: f64 },

    #[error("section is not on the unit sphere (defect {defect:.3e})")]
    NotUnitSection { defect: f64 },

    #[error("lambda = 0: point is not in the gluing locus")]
    NotInGluingLocus,

    #[error("lambda = 0: no monodromy at a Higgs fiber")]
    HiggsFiberMonodromy,

    #[error("points lie over different lambda values and cannot be compared")]
    IncomparablePoints,

    #[error("invalid torsion chain {0:?}: entries must be > 1 and each must divide the next")]
    InvalidTorsionChain(Vec<String>),

    #[error("descriptor is malformed: {0}")]
    MalformedDescriptor(String),

    #[error("chain shape mismatch: {0}")]
    ChainShapeMismatch(String),

    #[error("map does not send source relations into target relations (column {column})")]
    IllDefinedMap { column: usize },

    #[error(
        "refine path: weight of divisor {divisor} jumps by {jump:.3} between samples {index} and {}",
        index + 1
    )]
    RefinePath {
        divisor: usize,
        index: usize,
        jump: f64,
    },

    #[error("path is not closed (endpoint gap {gap:.3e})")]
    PathNotClosed { gap: f64 },

    #[error("divisor data length {got} does not match descriptor divisor count {expected}")]
    DivisorCountMismatch { expected: usize, got: usize },

    #[error("empty path")]
    EmptyPath,
}

pub type Result<T> = std::result::Result<T, Error>;
