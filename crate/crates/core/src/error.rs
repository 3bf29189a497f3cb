use alloc::vec::Vec;
use core::fmt;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument lies outside its admissible range.
    Domain { what: &'static str, value: f64 },
    /// A matrix that must be symmetric is not.
    SymmetryViolation { max_asymmetry: f64 },
    /// A covariance block or matrix is not positive definite.
    NotPositiveDefinite { what: &'static str },
    /// The covariance violates the uncertainty relation.
    Unphysical { min_symplectic_eigenvalue: f64 },
    /// The local-symplectic invariants admit no real standard form.
    NoStandardForm { discriminant: f64 },
    /// A block that must be inverted is numerically singular.
    Singular { condition_number: f64 },
    /// The objective returned a non-finite value.
    NonFiniteObjective { point: Vec<f64>, value: f64 },
    /// A search space or grid request is malformed.
    InvalidConfig(&'static str),
    /// Exhaustive grid would exceed the evaluation budget.
    GridBudgetExceeded { points: f64, budget: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of range: {value}"),
            Error::SymmetryViolation { max_asymmetry } => {
                write!(f, "symmetry violation: |M - Mᵀ| = {max_asymmetry:e}")
            }
            Error::NotPositiveDefinite { what } => write!(f, "{what} is not positive definite"),
            Error::Unphysical {
                min_symplectic_eigenvalue,
            } => write!(
                f,
                "unphysical covariance: smallest symplectic eigenvalue {min_symplectic_eigenvalue} < 1"
            ),
            Error::NoStandardForm { discriminant } => write!(
                f,
                "no real standard form (discriminant {discriminant:e}); input is unphysical"
            ),
            Error::Singular { condition_number } => {
                write!(f, "singular block (condition number {condition_number:e})")
            }
            Error::NonFiniteObjective { point, value } => {
                write!(f, "objective returned {value} at {point:?}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::GridBudgetExceeded { points, budget } => {
                write!(f, "grid of {points:e} points exceeds budget of {budget:e}")
            }
        }
    }
}

impl core::error::Error for Error {}
