use thiserror::Error;

/// Errors raised by the state-construction, oracle, and observable layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("squeeze parameter must be finite, got {0}")]
    NonFiniteSqueeze(f64),

    #[error("non-finite amplitude or weight in component {0}")]
    NonFiniteComponent(usize),

    #[error("empty superposition")]
    EmptySuperposition,

    /// Gram sum vanished or went negative: the weights cancel numerically.
    #[error("degenerate superposition (Gram sum {0:e})")]
    DegenerateSuperposition(f64),

    #[error("empty schedule")]
    EmptySchedule,

    #[error("invalid pulse area {area} at index {index}: must be finite and > 0")]
    InvalidPulseArea { index: usize, area: f64 },

    #[error("too many pulses: {0} (at most {max})", max = crate::protocol::MAX_PULSES)]
    TooManyPulses(usize),

    #[error("invalid tau {0}: must be finite and > 0")]
    InvalidTau(f64),

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),

    /// The probability held by the top tenth of Fock levels exceeded the policy bound.
    #[error("truncation too small: {context} leaves tail mass {tail_mass:e} above bound {bound:e} at dimension {dimension}")]
    TruncationTooSmall {
        context: String,
        tail_mass: f64,
        bound: f64,
        dimension: usize,
    },

    #[error("measurement branch vanished (probability {0:e})")]
    BranchVanished(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("degenerate density: no probability on the grid")]
    DegenerateDensity,

    #[error("coverage {0} must lie in (0, 1)")]
    InvalidCoverage(f64),

    #[error("coverage {coverage} unreachable: widest symmetric window holds {reached}")]
    CoverageUnreachable { coverage: f64, reached: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
