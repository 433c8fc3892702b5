//! Validated states and observables, qubit Bloch geometry, and the seeded
//! random ensembles used by the verification campaigns.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::linalg::{hermitian_eig, pauli, trace_prod, ComplexMatrix, C64};

/// Default tolerance for state and observable validation.
pub const DEFAULT_STATE_TOL: f64 = 1e-10;

/// Random stream for one trial: ChaCha8 (a counter-based generator with a
/// portable, documented output sequence) keyed by `seed ⊕ trial`.
pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed ^ trial)
}

/// A quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

/// Checks the three density-matrix invariants at `tol` and reports the first
/// one that fails.
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    let deviation = m.hermitian_deviation();
    if deviation > tol {
        return Err(Error::InvalidState(Violation::Hermiticity { deviation, tol }));
    }
    let mat = m.hermitian_part();
    let tr = mat.trace();
    let deviation = (tr - C64::new(1.0, 0.0)).norm();
    if deviation > tol {
        return Err(Error::InvalidState(Violation::Trace { deviation, tol }));
    }
    let min_eigenvalue = hermitian_eig(&mat)?.min_eigenvalue();
    if min_eigenvalue < -tol {
        return Err(Error::InvalidState(Violation::Psd {
            min_eigenvalue,
            tol,
        }));
    }
    Ok(DensityMatrix { mat })
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        validate_density(&m, DEFAULT_STATE_TOL)
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 > 0.0) {
            return Err(Error::InvalidInput("zero state vector".into()));
        }
        Self::new(ComplexMatrix::outer(psi).scale(1.0 / norm2))
    }

    /// `𝟙/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    /// Computational basis projector `|k⟩⟨k|`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut mat = ComplexMatrix::zeros(d);
        mat[(k, k)] = C64::new(1.0, 0.0);
        Self { mat }
    }

    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(p))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `ρᵀ` is a state whenever `ρ` is.
    pub fn transpose(&self) -> Self {
        Self {
            mat: self.mat.transpose(),
        }
    }

    /// `UρU†` for a unitary `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self {
            mat: self.mat.conjugate_by(u).hermitian_part(),
        }
    }

    pub fn purity(&self) -> f64 {
        trace_prod(&self.mat, &self.mat).expect("same dim").re
    }
}

/// A Hermitian operator entering the transport cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    mat: ComplexMatrix,
}

impl Observable {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tol(m, DEFAULT_STATE_TOL)
    }

    pub fn with_tol(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let deviation = m.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, tol });
        }
        Ok(Self {
            mat: m.hermitian_part(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn transpose(&self) -> Self {
        Self {
            mat: self.mat.transpose(),
        }
    }

    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self {
            mat: self.mat.conjugate_by(u).hermitian_part(),
        }
    }

    pub fn square(&self) -> ComplexMatrix {
        self.mat.matmul(&self.mat)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.mat.is_real(tol)
    }
}

fn check_dims(rho: &DensityMatrix, h: &Observable) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: h.dim(),
        });
    }
    Ok(())
}

/// `⟨H⟩_ρ = Tr(Hρ)`; the imaginary part is rounding noise and is dropped.
pub fn expectation(rho: &DensityMatrix, h: &Observable) -> Result<f64> {
    check_dims(rho, h)?;
    Ok(trace_prod(h.matrix(), rho.matrix())?.re)
}

/// `⟨H²⟩ − ⟨H⟩²`.
pub fn variance(rho: &DensityMatrix, h: &Observable) -> Result<f64> {
    check_dims(rho, h)?;
    let mean = expectation(rho, h)?;
    let second = trace_prod(&h.square(), rho.matrix())?.re;
    Ok(second - mean * mean)
}

/// Real 3-vector of Pauli coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r: [f64; 3],
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `½𝟙 + ½ r⃗·σ⃗`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(2).scale(0.5);
        for (s, &ra) in pauli::all().iter().zip(&self.r) {
            m.axpy(0.5 * ra, s);
        }
        m
    }
}

fn require_qubit(dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: dim,
        });
    }
    Ok(())
}

/// `r_a = Tr(σ_a ρ)`.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector> {
    require_qubit(rho.dim())?;
    let p = pauli::all();
    let mut r = [0.0; 3];
    for (ra, s) in r.iter_mut().zip(&p) {
        *ra = trace_prod(s, rho.matrix())?.re;
    }
    Ok(BlochVector { r })
}

/// `H = h₀𝟙 + h⃗·σ⃗` with `h₀ = Tr(H)/2`, `h_a = Tr(σ_a H)/2`.
pub fn bloch_of_observable(h: &Observable) -> Result<(f64, [f64; 3])> {
    require_qubit(h.dim())?;
    let h0 = h.matrix().trace().re / 2.0;
    let mut v = [0.0; 3];
    for (va, s) in v.iter_mut().zip(pauli::all().iter()) {
        *va = trace_prod(s, h.matrix())?.re / 2.0;
    }
    Ok((h0, v))
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_real<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), 0.0)
}

fn ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R, real: bool) -> ComplexMatrix {
    let mut data = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        data.push(if real {
            gaussian_real(rng)
        } else {
            gaussian_c64(rng)
        });
    }
    ComplexMatrix::from_vec(d, data).expect("d*d entries")
}

fn pure_from<R: Rng + ?Sized>(d: usize, rng: &mut R, real: bool) -> DensityMatrix {
    assert!(d >= 2, "ensembles need d >= 2");
    let psi: Vec<C64> = (0..d)
        .map(|_| {
            if real {
                gaussian_real(rng)
            } else {
                gaussian_c64(rng)
            }
        })
        .collect();
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    DensityMatrix {
        mat: ComplexMatrix::outer(&psi).scale(1.0 / norm2).hermitian_part(),
    }
}

fn mixed_from<R: Rng + ?Sized>(d: usize, rng: &mut R, real: bool) -> DensityMatrix {
    assert!(d >= 2, "ensembles need d >= 2");
    let g = ginibre(d, rng, real);
    let ggd = g.matmul(&g.adjoint());
    let tr = ggd.trace().re;
    DensityMatrix {
        mat: ggd.scale(1.0 / tr).hermitian_part(),
    }
}

fn hermitian_from<R: Rng + ?Sized>(d: usize, rng: &mut R, real: bool) -> Observable {
    assert!(d >= 2, "ensembles need d >= 2");
    let g = ginibre(d, rng, real);
    let mut h = g.add(&g.adjoint()).scale(0.5);
    let shift = h.trace().re / d as f64;
    h.axpy(-shift, &ComplexMatrix::identity(d));
    let eig = hermitian_eig(&h).expect("Hermitian by construction");
    let radius = eig.max_eigenvalue().abs().max(eig.min_eigenvalue().abs());
    Observable {
        mat: h.scale(1.0 / radius).hermitian_part(),
    }
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    pure_from(d, rng, false)
}

/// `GG†/Tr(GG†)` with `G` complex Ginibre.
pub fn random_mixed<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    mixed_from(d, rng, false)
}

/// Traceless Hermitian operator with unit operator norm.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Observable {
    hermitian_from(d, rng, false)
}

/// Pure state with a real amplitude vector.
pub fn random_real_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    pure_from(d, rng, true)
}

/// `GGᵀ/Tr(GGᵀ)` with `G` real Ginibre.
pub fn random_real_mixed<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    mixed_from(d, rng, true)
}

/// Real symmetric, traceless, unit operator norm.
pub fn random_real_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Observable {
    hermitian_from(d, rng, true)
}

/// Haar-random unitary: Gram–Schmidt on the columns of a complex Ginibre
/// matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, rng, false);
    let mut cols: Vec<Vec<C64>> = (0..d).map(|j| (0..d).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..d {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qk = &done[k];
            let proj: C64 = qk.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
            for (x, q) in rest[0].iter_mut().zip(qk) {
                *x -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(d, |i, j| cols[j][i])
}

/// Shared on-disk matrix format: `{"dim": n, "re": [...], "im": [...]}`,
/// both arrays row-major with `n²` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            re: m.re_parts(),
            im: m.im_parts(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.dim * j.dim {
            return Err(Error::DimensionMismatch {
                expected: j.dim * j.dim,
                found: j.re.len(),
            });
        }
        ComplexMatrix::from_parts(j.dim, &j.re, &j.im)
    }
}
