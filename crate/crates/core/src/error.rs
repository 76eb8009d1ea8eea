use thiserror::Error;

/// Errors raised by the measures, solvers and experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate weights: all entries are zero")]
    DegenerateWeights,

    #[error("invalid weight {value} at index {index}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("distribution does not sum to 1 (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("undefined prior: prior probability is zero")]
    UndefinedPrior,

    #[error("absolute-continuity violated at index {index}: reference mass is zero where the other has {mass}")]
    AbsoluteContinuity { index: usize, mass: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for alphabet of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid truth degree {value} at index {index}")]
    InvalidDegree { index: usize, value: f64 },

    #[error("truth function has no positive degree")]
    EmptyTruthFunction,

    #[error("null logical probability{}", message_suffix(*.message))]
    NullLogicalProbability { message: Option<usize> },

    #[error("invalid width {0}: must be positive and finite")]
    InvalidWidth(f64),

    #[error("alphabet has no numeric values")]
    MissingValues,

    #[error("closed form unavailable: truth function is not Gaussian-generated")]
    ClosedFormUnavailable,

    #[error("no admissible candidate")]
    NoAdmissibleCandidate,

    #[error("empty candidate list")]
    EmptyCandidates,

    #[error("invalid slope {0}: must be nonnegative and finite")]
    InvalidSlope(f64),

    #[error("slope grid must be nonnegative and strictly increasing")]
    InvalidGrid,

    #[error("invalid epsilon {0}: must lie in (0, 1)")]
    InvalidEpsilon(f64),

    #[error("infeasible fidelity target {target} (maximum achievable {max})")]
    InfeasibleTarget { target: f64, max: f64 },

    #[error("brute-force oracle over {events}x{messages} at resolution {resolution} is empty or exceeds the enumeration budget")]
    OracleTooLarge {
        events: usize,
        messages: usize,
        resolution: usize,
    },

    #[error(
        "matching point outside sweep; closest point at s = {closest_s} with R - G = {closest_gap}"
    )]
    MatchingOutsideSweep { closest_s: f64, closest_gap: f64 },

    #[error("bit depth {0} out of range")]
    InvalidBitDepth(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn message_suffix(message: Option<usize>) -> String {
    message
        .map(|m| format!(" for message {m}"))
        .unwrap_or_default()
}

pub type Result<T> = std::result::Result<T, Error>;
