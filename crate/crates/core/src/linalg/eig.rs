//! Cyclic Jacobi eigensolvers.
//!
//! Convergence is declared once the off-diagonal Frobenius mass falls below
//! `1e-14·‖M‖_F`, with a hard cap of 100 sweeps.

use super::{ComplexMatrix, C64, HERMITIAN_TOL, PSD_CLAMP_TOL};
use crate::error::{Error, Result};

const OFF_DIAG_REL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `M = Σ_k λ_k |k⟩⟨k|`.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    /// Sorted descending. Ties keep the order the sweeps produced.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigDecomposition {
    /// `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let w = f(self.eigenvalues[k]);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigDecomposition> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tol: HERMITIAN_TOL,
        });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    hermitian_jacobi(a.as_mut_slice(), v.as_mut_slice(), n);

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their sweep order
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Hermitian square root of a PSD matrix; eigenvalues in `[-1e-10, 0)` are
/// clamped to zero.
///
/// Positive eigenvalues at the rounding-noise level of the eigensolver
/// (`4·n·ε·max|λ|`) are zeroed too: their square roots are far larger than
/// the noise itself and would leak into anything built from `√M`.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let min = eig.min_eigenvalue();
    if min < -PSD_CLAMP_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            tol: PSD_CLAMP_TOL,
        });
    }
    let scale = eig.max_eigenvalue().abs().max(min.abs());
    let floor = 4.0 * m.dim() as f64 * f64::EPSILON * scale;
    Ok(eig
        .map_spectrum(|x| if x <= floor { 0.0 } else { x.sqrt() })
        .hermitian_part())
}

/// Frobenius-nearest PSD matrix: clip negative eigenvalues to zero.
pub fn psd_project(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    Ok(eig.map_spectrum(|x| x.max(0.0)).hermitian_part())
}

/// Diagonalizes the Hermitian row-major matrix `a` in place and accumulates
/// the rotations into the columns of `v`. Returns the number of sweeps.
pub(crate) fn hermitian_jacobi(a: &mut [C64], v: &mut [C64], n: usize) -> usize {
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let skip = f64::EPSILON * 1e-3 * norm;
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i * n + j].norm_sqr();
                }
            }
        }
        if off.sqrt() <= OFF_DIAG_REL_TOL * norm {
            return sweep;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let b = a[p * n + q];
                let ab = b.norm();
                if ab <= skip {
                    continue;
                }
                rotated = true;
                // e^{-iθ} where b = |b| e^{iθ}
                let ep = b.conj() / ab;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let (c, s, t) = rotation(app, aqq, ab);
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - ep * akq * s;
                    a[k * n + q] = akp * s + ep * akq * c;
                }
                let epc = ep.conj();
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - epc * aqk * s;
                    a[q * n + k] = apk * s + epc * aqk * c;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p] = C64::new(app - t * ab, 0.0);
                a[q * n + q] = C64::new(aqq + t * ab, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - ep * vkq * s;
                    v[k * n + q] = vkp * s + ep * vkq * c;
                }
            }
        }
        if !rotated {
            return sweep + 1;
        }
    }
    MAX_SWEEPS
}

/// Real symmetric counterpart of [`hermitian_jacobi`]. `v` may hold a warm
/// start basis `Q` when `a` was already rotated to `Qᵀ A Q`.
pub(crate) fn symmetric_jacobi(a: &mut [f64], v: &mut [f64], n: usize) -> usize {
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let skip = f64::EPSILON * 1e-3 * norm;
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i * n + j] * a[i * n + j];
                }
            }
        }
        if off.sqrt() <= OFF_DIAG_REL_TOL * norm {
            return sweep;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let b = a[p * n + q];
                if b.abs() <= skip {
                    continue;
                }
                rotated = true;
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let (c, s, t) = rotation(app, aqq, b);
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                a[p * n + p] = app - t * b;
                a[q * n + q] = aqq + t * b;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            return sweep + 1;
        }
    }
    MAX_SWEEPS
}

// Rotation annihilating the (p,q) entry of [[app, b], [b, aqq]].
#[inline]
fn rotation(app: f64, aqq: f64, b: f64) -> (f64, f64, f64) {
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    fn unitarity_error(v: &ComplexMatrix) -> f64 {
        v.adjoint()
            .matmul(v)
            .sub(&ComplexMatrix::identity(v.dim()))
            .frobenius_norm()
    }

    #[test]
    fn diagonal_input_is_left_alone() {
        let eig = hermitian_eig(&ComplexMatrix::from_diag(&[0.9, 0.1])).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.9, 0.1]);
        assert_eq!(eig.eigenvectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn diagonal_input_is_sorted_descending() {
        let eig = hermitian_eig(&ComplexMatrix::from_diag(&[0.1, 0.9])).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.9, 0.1]);
        assert!(unitarity_error(&eig.eigenvectors) < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let eig = hermitian_eig(&pauli::x()).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = &eig.eigenvectors;
        // columns (1,1)/√2 and (1,-1)/√2, each up to a global phase
        let overlap_plus = (v[(0, 0)].conj() * s + v[(1, 0)].conj() * s).norm();
        let overlap_minus = (v[(0, 1)].conj() * s - v[(1, 1)].conj() * s).norm();
        assert!((overlap_plus - 1.0).abs() < 1e-14);
        assert!((overlap_minus - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().sub(&pauli::x()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        let r = matrix_sqrt_psd(&half).unwrap();
        let expect = ComplexMatrix::identity(2).scale(std::f64::consts::FRAC_1_SQRT_2);
        assert!(r.sub(&expect).frobenius_norm() < 1e-15);

        let r = matrix_sqrt_psd(&ComplexMatrix::from_diag(&[0.9, 0.1])).unwrap();
        let expect = ComplexMatrix::from_diag(&[0.9f64.sqrt(), 0.1f64.sqrt()]);
        assert!(r.sub(&expect).frobenius_norm() < 1e-15);

        let plus = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]);
        let r = matrix_sqrt_psd(&plus).unwrap();
        assert!(r.sub(&plus).frobenius_norm() < 1e-14);
    }

    #[test]
    fn sqrt_rejects_negative_spectrum() {
        assert!(matches!(
            matrix_sqrt_psd(&pauli::z()),
            Err(Error::NotPsd { .. })
        ));
        // tiny negative eigenvalue is clamped
        let m = ComplexMatrix::from_diag(&[1.0, -5e-11]);
        let r = matrix_sqrt_psd(&m).unwrap();
        assert_eq!(r[(1, 1)].re, 0.0);
    }

    #[test]
    fn psd_projection_examples() {
        let p = psd_project(&ComplexMatrix::from_diag(&[1.0, -1.0])).unwrap();
        assert!(p.sub(&ComplexMatrix::from_diag(&[1.0, 0.0])).frobenius_norm() < 1e-15);

        let p = psd_project(&pauli::x()).unwrap();
        let expect = pauli::x().add(&ComplexMatrix::identity(2)).scale(0.5);
        assert!(p.sub(&expect).frobenius_norm() < 1e-14);

        let psd = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]);
        assert!(psd_project(&psd).unwrap().sub(&psd).frobenius_norm() < 1e-12);
    }

    #[test]
    fn symmetric_jacobi_diagonalizes() {
        let n = 3;
        let mut a = vec![2.0, 1.0, 0.5, 1.0, -1.0, 0.25, 0.5, 0.25, 0.0];
        let orig = a.clone();
        let mut v = vec![0.0; 9];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        symmetric_jacobi(&mut a, &mut v, n);
        // V diag V^T == orig
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n).map(|k| v[i * n + k] * a[k * n + k] * v[j * n + k]).sum();
                assert!((r - orig[i * n + j]).abs() < 1e-14);
            }
        }
    }
}
