//! Projection onto the marginal constraints `Tr₂X = A`, `Tr₁X = B`.
//!
//! The constraint map `𝒜(X) = (Tr₂X, Tr₁X)` has adjoint
//! `𝒜*(Y₁, Y₂) = Y₁⊗𝟙 + 𝟙⊗Y₂`, and `𝒜𝒜*` is inverted in closed form on
//! its range (the only redundancy is the shared trace). Both the projection
//! and the multiplier recovery below are that inverse written out. The two
//! factors may have different dimensions `d1`, `d2`.

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace_rect, ComplexMatrix, Subsystem};

fn joint_dims(x: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(usize, usize)> {
    let (d1, d2) = (a.dim(), b.dim());
    if x.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: x.dim(),
        });
    }
    Ok((d1, d2))
}

/// `R₁⊗𝟙/d2 + 𝟙⊗R₂/d1 − (Tr R₁ + Tr R₂)/(2·d1·d2)·𝟙`: the minimum-norm
/// operator whose marginals are `(R₁, R₂)` when `Tr R₁ = Tr R₂`.
fn lift(r1: &ComplexMatrix, r2: &ComplexMatrix) -> ComplexMatrix {
    let (d1, d2) = (r1.dim(), r2.dim());
    let n = d1 * d2;
    let tau = (r1.trace() + r2.trace()) * 0.5;
    let mut out = kron(r1, &ComplexMatrix::identity(d2)).scale(1.0 / d2 as f64);
    out.axpy(1.0 / d1 as f64, &kron(&ComplexMatrix::identity(d1), r2));
    out.sub(&ComplexMatrix::identity(n).scale_c(tau / n as f64))
}

/// Frobenius-nearest matrix to `x` with `Tr₂ = a` and `Tr₁ = b`.
pub fn affine_project(
    x: &ComplexMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let (d1, d2) = joint_dims(x, a, b)?;
    let r1 = partial_trace_rect(x, Subsystem::Second, d1, d2)?.sub(a);
    let r2 = partial_trace_rect(x, Subsystem::First, d1, d2)?.sub(b);
    Ok(x.sub(&lift(&r1, &r2)))
}

/// Orthogonal projection of `m` onto `{Y₁⊗𝟙 + 𝟙⊗Y₂}`, returned as the pair
/// `(Y₁, Y₂)` with the trace split evenly.
pub fn split_multipliers(
    m: &ComplexMatrix,
    d1: usize,
    d2: usize,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let t1 = partial_trace_rect(m, Subsystem::Second, d1, d2)?;
    let t2 = partial_trace_rect(m, Subsystem::First, d1, d2)?;
    // m is Hermitian up to rounding; the imaginary trace is noise
    let shift = m.trace().re / (2 * d1 * d2) as f64;
    let mut y1 = t1.scale(1.0 / d2 as f64);
    y1.axpy(-shift, &ComplexMatrix::identity(d1));
    let mut y2 = t2.scale(1.0 / d1 as f64);
    y2.axpy(-shift, &ComplexMatrix::identity(d2));
    Ok((y1.hermitian_part(), y2.hermitian_part()))
}

/// `Y₁⊗𝟙 + 𝟙⊗Y₂`.
pub fn adjoint_map(y1: &ComplexMatrix, y2: &ComplexMatrix) -> ComplexMatrix {
    kron(y1, &ComplexMatrix::identity(y2.dim())).add(&kron(&ComplexMatrix::identity(y1.dim()), y2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{random_hermitian, random_mixed, trial_rng};

    fn marginals(x: &ComplexMatrix, d1: usize, d2: usize) -> (ComplexMatrix, ComplexMatrix) {
        (
            partial_trace_rect(x, Subsystem::Second, d1, d2).unwrap(),
            partial_trace_rect(x, Subsystem::First, d1, d2).unwrap(),
        )
    }

    #[test]
    fn zero_maps_to_feasible_marginals() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        let p = affine_project(&ComplexMatrix::zeros(4), &half, &half).unwrap();
        let (m1, m2) = marginals(&p, 2, 2);
        assert!(m1.sub(&half).frobenius_norm() < 1e-15);
        assert!(m2.sub(&half).frobenius_norm() < 1e-15);
    }

    #[test]
    fn feasible_points_are_fixed_and_projection_is_idempotent() {
        let mut rng = trial_rng(9, 0);
        for (d1, d2) in [(2, 2), (3, 3), (2, 3), (3, 1)] {
            let a = random_mixed(d1.max(2), &mut rng);
            let a = if d1 == 1 { ComplexMatrix::identity(1) } else { a.into_matrix() };
            let b = random_mixed(d2.max(2), &mut rng);
            let b = if d2 == 1 { ComplexMatrix::identity(1) } else { b.into_matrix() };
            let feasible = kron(&a, &b);
            let p = affine_project(&feasible, &a, &b).unwrap();
            assert!(p.sub(&feasible).frobenius_norm() < 1e-12);

            let x = random_hermitian(d1 * d2, &mut rng);
            let once = affine_project(x.matrix(), &a, &b).unwrap();
            let twice = affine_project(&once, &a, &b).unwrap();
            assert!(once.sub(&twice).frobenius_norm() < 1e-12);
            let (m1, m2) = marginals(&once, d1, d2);
            assert!(m1.sub(&a).frobenius_norm() < 1e-13);
            assert!(m2.sub(&b).frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn anti_hermitian_noise_is_projected_not_amplified() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        let x = ComplexMatrix::identity(4).scale_c(crate::linalg::C64::new(0.25, 1e-3));
        let p = affine_project(&x, &half, &half).unwrap();
        assert!(p.max_abs_imag() < 1e-15);
    }

    #[test]
    fn multipliers_recover_adjoint_image() {
        let mut rng = trial_rng(10, 0);
        let y1 = random_hermitian(3, &mut rng).matrix().clone();
        let y2 = random_hermitian(2, &mut rng).matrix().add(&ComplexMatrix::identity(2));
        let m = adjoint_map(&y1, &y2);
        let (z1, z2) = split_multipliers(&m, 3, 2).unwrap();
        assert!(adjoint_map(&z1, &z2).sub(&m).frobenius_norm() < 1e-13);
    }

    #[test]
    fn rejects_mismatched_dims() {
        let a = ComplexMatrix::identity(2);
        assert!(affine_project(&ComplexMatrix::zeros(5), &a, &a).is_err());
        assert!(affine_project(&ComplexMatrix::zeros(9), &a, &a).is_err());
    }
}
