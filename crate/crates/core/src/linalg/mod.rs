//! Dense complex linear algebra for small Hermitian matrices.
//!
//! Everything here is sized for operators on one or two qudits (dimension up
//! to a few dozen), so matrices are stored as flat row-major `Vec`s and all
//! kernels are plain loops. Bipartite operators use the convention that
//! subsystem 1 is the slow (left) index: `(A⊗B)[i·dB + k, j·dB + l] = A[i,j]·B[k,l]`.

mod eig;
mod matrix;

pub use eig::{hermitian_eig, matrix_sqrt_psd, psd_project, EigDecomposition};
pub(crate) use eig::symmetric_jacobi;
pub use matrix::ComplexMatrix;

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hermiticity tolerance applied to inputs of the Hermitian kernels.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are treated as zero by the PSD kernels.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// One factor of a bipartite system `H₁ ⊗ H₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Kronecker product with subsystem 1 on the slow index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Traces out `side` of an operator on `C^d ⊗ C^d`.
///
/// `partial_trace(x, Subsystem::Second, d)` is `Tr₂ X`, the marginal on
/// subsystem 1.
pub fn partial_trace(x: &ComplexMatrix, side: Subsystem, d: usize) -> Result<ComplexMatrix> {
    partial_trace_rect(x, side, d, d)
}

/// Partial trace on `C^{d1} ⊗ C^{d2}`.
pub fn partial_trace_rect(
    x: &ComplexMatrix,
    side: Subsystem,
    d1: usize,
    d2: usize,
) -> Result<ComplexMatrix> {
    if d1 == 0 || d2 == 0 || x.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: x.dim(),
        });
    }
    let (keep, traced) = match side {
        Subsystem::Second => (d1, d2),
        Subsystem::First => (d2, d1),
    };
    let mut out = ComplexMatrix::zeros(keep);
    for i in 0..keep {
        for j in 0..keep {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..traced {
                acc += match side {
                    Subsystem::Second => x[(i * d2 + k, j * d2 + k)],
                    Subsystem::First => x[(k * d2 + i, k * d2 + j)],
                };
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// `Tr(A·B)` without forming the product.
pub fn trace_prod(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    a.check_same_dim(b)?;
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(acc)
}

/// Pauli matrices and computational-basis helpers for qubits.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> ComplexMatrix {
        let z = C64::new(0.0, 0.0);
        ComplexMatrix::from_vec(2, vec![z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z])
            .expect("2x2")
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// `(σ_x, σ_y, σ_z)`.
    pub fn all() -> [ComplexMatrix; 3] {
        [x(), y(), z()]
    }
}
