use thiserror::Error;

/// Errors produced by spectrum validation, criterion evaluation and the
/// closed-form and grid routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} eigenvalues for a {m}x{n} system, got {got}")]
    WrongLength {
        m: usize,
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("subsystem dimensions must both be at least 2 (got m={m}, n={n})")]
    InvalidDimensions { m: usize, n: usize },
    #[error("eigenvalue at position {index} is negative ({value})")]
    NegativeEigenvalue { index: usize, value: f64 },
    #[error("eigenvalue at position {index} is not finite")]
    NonFinite { index: usize },
    #[error("eigenvalues sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("criterion {criterion} needs a subsystem of dimension {required} (got m={m}, n={n})")]
    DimensionMismatch {
        criterion: &'static str,
        required: usize,
        m: usize,
        n: usize,
    },
    #[error("no spectral criterion is known for min(m, n) = {min_dim} (m={m}, n={n})")]
    UnsupportedDimensions { m: usize, n: usize, min_dim: usize },
    #[error("{what} is defined for {domain} (got {value})")]
    Domain {
        what: &'static str,
        domain: &'static str,
        value: usize,
    },
    #[error("grid enumeration would visit {estimated} spectra, above the budget of {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },
    #[error("no grid spectrum at resolution {resolution} satisfies the criterion")]
    NoFeasiblePoint { resolution: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
