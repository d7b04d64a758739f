use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A real spectral parameter sits on the cut `[n + 1/2, inf)` of the branch of
    /// `sqrt(n + 1/2 - lambda)`.
    #[error("spectral parameter {lambda} lies on the branch cut [{}, inf) of zeta_{n}", *n as f64 + 0.5)]
    OnBranchCut { n: usize, lambda: Complex64 },

    /// The real Jacobi truncation requires `lambda < 1/2`.
    #[error("lambda = {0} must be below the threshold 1/2 for a real Jacobi matrix")]
    BranchCut(f64),

    #[error("closed form is singular: {0}")]
    SingularFormula(String),

    #[error("matrix of size {size} exceeds the dense oracle limit {limit}")]
    SizeExceeded { size: usize, limit: usize },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// `|mu| <= 1` with real lambda: both recurrence solutions have the same modulus growth.
    #[error("no dominant/minimal split for mu = {mu}, lambda = {lambda}")]
    NoDominanceSplit { mu: f64, lambda: Complex64 },

    #[error("no subcritical branch (mu > 1) for these parameters")]
    NoSubcriticalBranch,

    #[error(
        "beta = 0 trial violates the boundary relation f_- = -(conj(gamma)/2) f_+ (mode {mode}, mismatch {mismatch:e})"
    )]
    Beta0ConstraintViolated { mode: usize, mismatch: f64 },
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
