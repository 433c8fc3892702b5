//! Facial reduction for rank-deficient marginals.
//!
//! If `Tr₂X = A` with `X ⪰ 0`, then `X` is supported on `supp(A) ⊗ C^d`, and
//! likewise for `B`. Every feasible coupling therefore lives on
//! `supp(A) ⊗ supp(B)`. Compressing the problem to that subspace gives
//! marginals of full rank, where a strictly feasible point exists and the
//! dual optimum is attained. Without it a pure marginal pins the feasible
//! set to a single point and the iteration stalls.

use crate::error::Result;
use crate::linalg::{hermitian_eig, kron, ComplexMatrix};
use crate::state::DensityMatrix;

/// Marginal eigenvalues at or below this are treated as zero.
pub const RANK_TOL: f64 = 1e-11;

#[derive(Debug, Clone)]
pub(crate) struct Face {
    d: usize,
    r1: usize,
    r2: usize,
    /// `None` when both marginals have full rank.
    basis: Option<Bases>,
}

#[derive(Debug, Clone)]
struct Bases {
    v1: ComplexMatrix,
    v2: ComplexMatrix,
    joint: ComplexMatrix,
}

fn support(m: &DensityMatrix) -> Result<(ComplexMatrix, usize)> {
    let eig = hermitian_eig(m.matrix())?;
    // eigenvalues come sorted in descending order
    let rank = eig.eigenvalues.iter().filter(|&&l| l > RANK_TOL).count().max(1);
    Ok((eig.eigenvectors, rank))
}

/// Principal submatrix of `m` on the rows and columns in `stride`.
fn corner(m: &ComplexMatrix, stride: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(stride.len(), |i, j| m[(stride[i], stride[j])])
}

/// Inverse of [`corner`]: zero-padded embedding.
fn pad(m: &ComplexMatrix, n: usize, stride: &[usize]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n);
    for (i, &si) in stride.iter().enumerate() {
        for (j, &sj) in stride.iter().enumerate() {
            out[(si, sj)] = m[(i, j)];
        }
    }
    out
}

impl Face {
    pub fn of(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        let d = a.dim();
        let (v1, r1) = support(a)?;
        let (v2, r2) = support(b)?;
        let basis = if r1 == d && r2 == d {
            None
        } else {
            let joint = kron(&v1, &v2);
            Some(Bases { v1, v2, joint })
        };
        Ok(Self { d, r1, r2, basis })
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    fn joint_index(&self) -> Vec<usize> {
        (0..self.r1)
            .flat_map(|i| (0..self.r2).map(move |k| i * self.d + k))
            .collect()
    }

    fn compress(m: &ComplexMatrix, v: &ComplexMatrix, index: &[usize]) -> ComplexMatrix {
        let rotated = v.adjoint().matmul(&m.matmul(v));
        corner(&rotated, index)
    }

    fn expand(m: &ComplexMatrix, v: &ComplexMatrix, index: &[usize]) -> ComplexMatrix {
        pad(m, v.dim(), index).conjugate_by(v)
    }

    /// `W† M W` restricted to the face, for an operator on `C^d ⊗ C^d`.
    pub fn compress_joint(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => m.clone(),
            Some(b) => Self::compress(m, &b.joint, &self.joint_index()),
        }
    }

    pub fn expand_joint(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => m.clone(),
            Some(b) => Self::expand(m, &b.joint, &self.joint_index()),
        }
    }

    pub fn compress_1(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => m.clone(),
            Some(b) => Self::compress(m, &b.v1, &(0..self.r1).collect::<Vec<_>>()),
        }
    }

    pub fn compress_2(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => m.clone(),
            Some(b) => Self::compress(m, &b.v2, &(0..self.r2).collect::<Vec<_>>()),
        }
    }

    pub fn expand_1(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => m.clone(),
            Some(b) => Self::expand(m, &b.v1, &(0..self.r1).collect::<Vec<_>>()),
        }
    }

    pub fn expand_2(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => m.clone(),
            Some(b) => Self::expand(m, &b.v2, &(0..self.r2).collect::<Vec<_>>()),
        }
    }
}
