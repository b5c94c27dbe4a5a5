use thiserror::Error;

/// Errors raised by the capacity toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported Hilbert space dimension {0} (must be 2, 3 or 4)")]
    UnsupportedDimension(usize),
    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("density matrix trace is {0}, expected 1")]
    InvalidTrace(f64),
    #[error("matrix has negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid channel matrix at row {row}: {reason}")]
    InvalidChannel { row: usize, reason: String },
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("no convergence after {iterations} iterations (bounds [{lower}, {upper}] nats)")]
    NonConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },
    #[error("average state is ill-conditioned on the signal span (condition number {0:e})")]
    IllConditioned(f64),
    #[error("signal {0} is not a linear polarization (complex amplitudes)")]
    NotLinearPolarization(usize),
    #[error("signals are identical")]
    IdenticalSignals,
    #[error("unsupported signal angle {0} rad (only 0 and pi/2 are supported)")]
    UnsupportedAngle(f64),
    #[error("invalid intensities: need 0 <= gamma0 < gamma1, got gamma0={gamma0}, gamma1={gamma1}")]
    InvalidIntensity { gamma0: f64, gamma1: f64 },
    #[error("invalid cost vector: {0}")]
    InvalidCosts(String),
    #[error("divergence undefined: Q vanishes at index {0} where P does not")]
    AbsoluteContinuity(usize),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("index {index} out of range for {len} symbols")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{0}")]
    Domain(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::IllConditioned(_) | Error::Quadrature(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
