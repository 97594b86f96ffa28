use thiserror::Error;

/// Errors produced by phase computations.
#[derive(Debug, Clone, Error)]
pub enum PhaseError {
    /// The complex quantity whose argument is requested has (near-)zero
    /// magnitude, so its phase is undefined. Occurs at phase-jump points,
    /// e.g. a maximally entangled S state at cos(Nγ) = 0.
    #[error("phase undefined: |z| = {magnitude:.3e} below threshold")]
    ZeroMagnitude { magnitude: f64 },

    /// The 2x2 spectrum is (near-)degenerate; the eigenbasis is ill-defined.
    #[error("degenerate spectrum: r = {r:.3e} < 1e-9, eigenbasis ill-defined")]
    DegenerateSpectrum { r: f64 },

    /// A subsystem density matrix is (near-)degenerate; the mixed-state
    /// phase formulas are invalid there and would require path ordering.
    #[error("degenerate subsystem: r = {r:.3e} < 1e-9, mixed-state phase formula invalid")]
    DegenerateSubsystem { r: f64 },

    /// The composite phase formula requires every local unitary to bring its
    /// subsystem back to the same ray.
    #[error("loop is not cyclic: composite phase formula requires cyclic local loops")]
    NonCyclicLoop,

    /// An enumeration or state dimension exceeds the configured cap.
    #[error("too large: {size} exceeds cap {cap}")]
    TooLarge { size: u128, cap: u128 },

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// A half-resolution consistency check disagreed with the full grid.
    #[error("grid too coarse: refinement disagrees by {disagreement:.3e} (tolerance {tolerance:.1e})")]
    GridTooCoarse { disagreement: f64, tolerance: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub type Result<T> = std::result::Result<T, PhaseError>;
