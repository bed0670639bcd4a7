use thiserror::Error;

/// Errors produced by lattice construction, spectral solves and the
/// analysis pipelines.
#[derive(Error, Debug)]
pub enum Error {
    /// Invalid lattice/model/grid parameters (rejected before any numerics run).
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// A root bracket could not be established or an iteration cap was hit.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// E1 - E0 fell below resolution; the point is flagged instead of
    /// emitting an unreliable integrand.
    #[error("degenerate gap at s = {s}: gap = {gap:e}")]
    DegenerateGap { s: f64, gap: f64 },

    /// The integrand curve has more than one half-height crossing pair.
    #[error("multi-modal integrand curve; half-height crossings at {crossings:?}")]
    MultiModalPeak { crossings: Vec<f64> },

    /// The sampled maximum sits on the boundary of the s grid.
    #[error("integrand curve has no interior peak")]
    NoInteriorPeak,

    /// The curve never drops to half of the peak on one side.
    #[error("no half-height crossing on the {side} side of the peak")]
    NoHalfHeightCrossing { side: &'static str },

    /// A quantity violated one of the checked run-time invariants.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// Packet/parameter combination refers to different adiabatic parameters.
    #[error("mismatched parameters: {0}")]
    Mismatch(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for validation errors, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidSpec(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
