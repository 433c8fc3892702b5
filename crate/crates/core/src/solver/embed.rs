//! Real symmetric embedding `M ↦ [[Re M, −Im M], [Im M, Re M]]` and the
//! PSD-cone projection carried out in the embedded space.
//!
//! The embedding is an isometry up to a factor `√2` in Frobenius norm, maps
//! Hermitian to symmetric matrices, and doubles every eigenvalue's
//! multiplicity. Projecting an embedded matrix onto the PSD cone yields an
//! embedded matrix again.

use crate::linalg::{symmetric_jacobi, ComplexMatrix, C64};

/// `2n × 2n` real symmetric image of an `n × n` Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedded {
    n: usize,
    data: Vec<f64>,
}

impl Embedded {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; 4 * n * n],
        }
    }

    /// Complex dimension `n`; the stored matrix is `2n × 2n`.
    pub fn complex_dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Frobenius norm of the complex matrix this embeds.
    pub fn complex_norm(&self) -> f64 {
        (self.data.iter().map(|x| x * x).sum::<f64>() / 2.0).sqrt()
    }

    /// `‖self − other‖_F` measured on the complex side.
    pub fn complex_distance(&self, other: &Self) -> f64 {
        let s: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (s / 2.0).sqrt()
    }

    /// `⟨self, other⟩ = 2 Re Tr(A B)` for Hermitian `A`, `B`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }
}

pub fn embed(m: &ComplexMatrix) -> Embedded {
    let n = m.dim();
    let w = 2 * n;
    let mut data = vec![0.0; w * w];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            data[i * w + j] = z.re;
            data[(n + i) * w + n + j] = z.re;
            data[i * w + n + j] = -z.im;
            data[(n + i) * w + j] = z.im;
        }
    }
    Embedded { n, data }
}

/// Inverse of [`embed`]; duplicated blocks are averaged, which is also the
/// orthogonal projection onto the image of the embedding.
pub fn unembed(e: &Embedded) -> ComplexMatrix {
    let n = e.n;
    let w = 2 * n;
    let d = &e.data;
    ComplexMatrix::from_fn(n, |i, j| {
        C64::new(
            0.5 * (d[i * w + j] + d[(n + i) * w + n + j]),
            0.5 * (d[(n + i) * w + j] - d[i * w + n + j]),
        )
    })
}

/// PSD projection by eigenvalue clipping. Keeps the previous eigenbasis as a
/// warm start: consecutive solver iterates are close, so the rotated input
/// is nearly diagonal and the Jacobi sweeps finish quickly.
pub(crate) struct PsdProjector {
    m: usize,
    basis: Vec<f64>,
    rotated: Vec<f64>,
    tmp: Vec<f64>,
    calls: usize,
}

/// The warm basis is rebuilt from scratch this often to stop rounding drift.
const BASIS_REFRESH: usize = 500;

impl PsdProjector {
    pub fn new(n: usize) -> Self {
        let m = 2 * n;
        Self {
            m,
            basis: identity(m),
            rotated: vec![0.0; m * m],
            tmp: vec![0.0; m * m],
            calls: 0,
        }
    }

    /// Writes the PSD part of `w` to `out`.
    pub fn project(&mut self, w: &Embedded, out: &mut Embedded) {
        let m = self.m;
        debug_assert_eq!(w.data.len(), m * m);
        if self.calls % BASIS_REFRESH == 0 {
            self.basis = identity(m);
        }
        self.calls += 1;

        // rotated = Qᵀ W Q
        let q = &self.basis;
        let (tmp, rot) = (&mut self.tmp, &mut self.rotated);
        tmp.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..m {
            for k in 0..m {
                let wik = w.data[i * m + k];
                if wik == 0.0 {
                    continue;
                }
                for j in 0..m {
                    tmp[i * m + j] += wik * q[k * m + j];
                }
            }
        }
        rot.iter_mut().for_each(|x| *x = 0.0);
        for k in 0..m {
            for i in 0..m {
                let qki = q[k * m + i];
                if qki == 0.0 {
                    continue;
                }
                for j in 0..m {
                    rot[i * m + j] += qki * tmp[k * m + j];
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                let s = 0.5 * (rot[i * m + j] + rot[j * m + i]);
                rot[i * m + j] = s;
                rot[j * m + i] = s;
            }
        }

        symmetric_jacobi(rot, &mut self.basis, m);

        let v = &self.basis;
        out.data.iter_mut().for_each(|x| *x = 0.0);
        for k in 0..m {
            let lam = rot[k * m + k];
            if lam <= 0.0 {
                continue;
            }
            for i in 0..m {
                let vik = v[i * m + k] * lam;
                if vik == 0.0 {
                    continue;
                }
                for j in 0..m {
                    out.data[i * m + j] += vik * v[j * m + k];
                }
            }
        }
        out.n = w.n;
    }
}

fn identity(m: usize) -> Vec<f64> {
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    v
}
