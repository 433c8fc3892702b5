use std::fmt;

use thiserror::Error;

/// Which density-matrix invariant an input broke, and by how much.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Relative Frobenius norm of `M - M†`.
    Hermiticity { deviation: f64, tol: f64 },
    /// `|Tr M - 1|`.
    Trace { deviation: f64, tol: f64 },
    /// Most negative eigenvalue.
    Psd { min_eigenvalue: f64, tol: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Hermiticity { deviation, tol } => write!(
                f,
                "hermiticity violation {} (tolerance {:e})",
                fmt_amount(*deviation),
                tol
            ),
            Violation::Trace { deviation, tol } => write!(
                f,
                "trace violation {} (tolerance {:e})",
                fmt_amount(*deviation),
                tol
            ),
            Violation::Psd {
                min_eigenvalue,
                tol,
            } => write!(
                f,
                "positivity violation: min eigenvalue {} (tolerance {:e})",
                fmt_amount(*min_eigenvalue),
                tol
            ),
        }
    }
}

// Short human-readable amount: 0.09999999999999998 prints as 0.1.
fn fmt_amount(x: f64) -> String {
    if x.abs() >= 1e-4 {
        let s = format!("{x:.10}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian: deviation {deviation:e} exceeds tolerance {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e} below -{tol:e}")]
    NotPsd { min_eigenvalue: f64, tol: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(Violation),

    #[error("marginal traces differ by {0:e}; no coupling exists")]
    InfeasibleMarginals(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
