//! Wigner–Yanase skew information and quantum Fisher information.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, matrix_sqrt_psd, trace_prod};
use crate::state::{DensityMatrix, Observable};

/// Results below zero by less than this are rounding noise and become 0.
const NEG_CLAMP: f64 = 1e-12;
/// Results below `-NEG_FAIL` mean the computation itself went wrong.
const NEG_FAIL: f64 = 1e-10;
/// Relative cutoff on `λ_k + λ_l` in the Fisher-information sum.
const QFI_EPS_REL: f64 = 1e-12;

fn check_dims(rho: &DensityMatrix, h: &Observable) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: h.dim(),
        });
    }
    Ok(())
}

fn clamp_nonnegative(x: f64, what: &str) -> Result<f64> {
    if x < -NEG_FAIL {
        return Err(Error::Numerical(format!("{what} evaluated to {x:e}")));
    }
    Ok(if x < 0.0 && x >= -NEG_CLAMP { 0.0 } else { x })
}

/// `I_ρ(H) = Tr(H²ρ) − Tr(H√ρ H√ρ)`.
pub fn skew_information(rho: &DensityMatrix, h: &Observable) -> Result<f64> {
    check_dims(rho, h)?;
    let sqrt_rho = matrix_sqrt_psd(rho.matrix())?;
    let h2_rho = trace_prod(&h.square(), rho.matrix())?.re;
    let h_sr = h.matrix().matmul(&sqrt_rho);
    let cross = trace_prod(&h_sr, &h_sr)?.re;
    clamp_nonnegative(h2_rho - cross, "skew information")
}

/// `F_Q[ρ,H] = 2 Σ_{k,l} (λ_k−λ_l)²/(λ_k+λ_l) |⟨k|H|l⟩|²`, skipping pairs
/// whose `λ_k+λ_l` is below `1e-12·λ_max`.
pub fn qfi(rho: &DensityMatrix, h: &Observable) -> Result<f64> {
    check_dims(rho, h)?;
    let eig = hermitian_eig(rho.matrix())?;
    let v = &eig.eigenvectors;
    let lambda = &eig.eigenvalues;
    let eps = QFI_EPS_REL * eig.max_eigenvalue();
    let h_eig = v.adjoint().matmul(h.matrix()).matmul(v);
    let n = rho.dim();
    let mut acc = 0.0;
    for k in 0..n {
        for l in 0..n {
            let s = lambda[k] + lambda[l];
            if k == l || s <= eps {
                continue;
            }
            let diff = lambda[k] - lambda[l];
            acc += diff * diff / s * h_eig[(k, l)].norm_sqr();
        }
    }
    clamp_nonnegative(2.0 * acc, "quantum Fisher information")
}
