use thiserror::Error;

/// Failures raised by the estimators and their building blocks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("non-positive parameter: {0}")]
    NonPositiveParameter(String),

    #[error("not distinguishable: gain {0} is below 1")]
    NotDistinguishable(String),

    #[error("gain {tau} is not compatible with the data: observation {observation} is not in its lattice")]
    Incompatible { tau: String, observation: u64 },

    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),

    #[error("no nonzero observations")]
    NoNonzeroObservations,

    #[error("no distinguishable solution: no compatible gain above 1 below the density bound")]
    NoDistinguishableSolution,

    #[error("invalid index assignment: {0}")]
    InvalidIndices(String),

    #[error("degenerate sample, zero dispersion")]
    ZeroDispersion,

    #[error("spectrum too coarse: no admissible frequency bin")]
    SpectrumTooCoarse,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
