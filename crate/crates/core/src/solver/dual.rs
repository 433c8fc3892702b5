//! Weak-duality certificates for the coupling problem.
//!
//! For Hermitian `Y₁, Y₂` with `C − Y₁⊗𝟙 − 𝟙⊗Y₂ ⪰ 0` on the support of the
//! feasible set, every feasible coupling `X` satisfies
//! `Tr(CX) ≥ Tr(Y₁A) + Tr(Y₂B)`. The support is `supp(A) ⊗ supp(B)`, which
//! is the whole space unless a marginal is rank-deficient.

use super::affine::adjoint_map;
use super::SdpProblem;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, trace_prod, ComplexMatrix};

/// Slack eigenvalues down to `-DUAL_PSD_TOL` are accepted as PSD.
pub const DUAL_PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DualCheck {
    /// Valid lower bound on the optimum.
    Feasible { bound: f64, min_slack_eigenvalue: f64 },
    /// The slack has an eigenvalue below `-DUAL_PSD_TOL`.
    Infeasible { min_slack_eigenvalue: f64 },
}

impl DualCheck {
    pub fn bound(&self) -> Option<f64> {
        match *self {
            DualCheck::Feasible { bound, .. } => Some(bound),
            DualCheck::Infeasible { .. } => None,
        }
    }
}

pub(crate) fn slack(cost: &ComplexMatrix, y1: &ComplexMatrix, y2: &ComplexMatrix) -> ComplexMatrix {
    cost.sub(&adjoint_map(y1, y2)).hermitian_part()
}

pub(crate) fn objective(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    y1: &ComplexMatrix,
    y2: &ComplexMatrix,
) -> f64 {
    trace_prod(y1, a).expect("dims").re + trace_prod(y2, b).expect("dims").re
}

/// Checks dual feasibility of `(Y₁, Y₂)` and returns the bound it certifies.
pub fn dual_bound(p: &SdpProblem, y1: &ComplexMatrix, y2: &ComplexMatrix) -> Result<DualCheck> {
    let d = p.marginal_dim();
    for y in [y1, y2] {
        if y.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: y.dim(),
            });
        }
    }
    let s = p.face.compress_joint(&slack(p.cost(), y1, y2));
    let min = hermitian_eig(&s.hermitian_part())?.min_eigenvalue();
    if min < -DUAL_PSD_TOL {
        return Ok(DualCheck::Infeasible {
            min_slack_eigenvalue: min,
        });
    }
    Ok(DualCheck::Feasible {
        bound: objective(p.marginal_1().matrix(), p.marginal_2().matrix(), y1, y2),
        min_slack_eigenvalue: min,
    })
}

/// Shifts `Y₁` down by the most negative slack eigenvalue so the slack
/// becomes PSD.
pub(crate) fn repair(
    cost: &ComplexMatrix,
    y1: ComplexMatrix,
    y2: ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let min = hermitian_eig(&slack(cost, &y1, &y2))?.min_eigenvalue();
    if min >= 0.0 {
        return Ok((y1, y2));
    }
    let mut y1 = y1;
    y1.axpy(min, &ComplexMatrix::identity(y1.dim()));
    Ok((y1, y2))
}
