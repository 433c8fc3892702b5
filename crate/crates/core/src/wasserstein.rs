//! GMPC and DPT Wasserstein-2 distances, their closed-form companions, and
//! the qubit realification that makes the two coincide.
//!
//! Distances store the halved objective in `d_squared`; the embedded
//! [`SdpSolution`] keeps the unhalved solver values.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::info::{qfi, skew_information};
use crate::linalg::{hermitian_eig, kron, pauli, trace_prod, ComplexMatrix, C64};
use crate::solver::{solve_coupling, Coupling, SdpProblem, SdpSolution, SolverOptions};
use crate::state::{bloch_of_observable, expectation, variance, DensityMatrix, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definition {
    /// Cost `(H⊗𝟙 − 𝟙⊗H)²`, marginals `(ρ, σ)`.
    Gmpc,
    /// Cost `(Hᵀ⊗𝟙 − 𝟙⊗H)²`, marginals `(ρᵀ, σ)`.
    Dpt,
}

impl Definition {
    pub fn name(&self) -> &'static str {
        match self {
            Definition::Gmpc => "gmpc",
            Definition::Dpt => "dpt",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DistanceResult {
    /// Squared distance: half the optimal transport cost.
    pub d_squared: f64,
    pub definition: Definition,
    pub operators: Vec<Observable>,
    pub solution: SdpSolution,
}

impl DistanceResult {
    pub fn coupling(&self) -> &Coupling {
        &self.solution.coupling
    }

    /// Certified lower bound on `d_squared`.
    pub fn dual_bound(&self) -> f64 {
        self.solution.dual_bound / 2.0
    }

    pub fn converged(&self) -> bool {
        self.solution.converged
    }

    pub fn relative_gap(&self) -> f64 {
        self.solution.relative_gap()
    }
}

fn common_dim(hs: &[Observable]) -> Result<usize> {
    let first = hs
        .first()
        .ok_or_else(|| Error::InvalidInput("operator list is empty".into()))?;
    let d = first.dim();
    if let Some(h) = hs.iter().find(|h| h.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: h.dim(),
        });
    }
    Ok(d)
}

fn squared_difference_sum(hs: &[Observable], transpose_left: bool) -> Result<ComplexMatrix> {
    let d = common_dim(hs)?;
    let id = ComplexMatrix::identity(d);
    let mut cost = ComplexMatrix::zeros(d * d);
    for h in hs {
        let left = if transpose_left {
            h.matrix().transpose()
        } else {
            h.matrix().clone()
        };
        let diff = kron(&left, &id).sub(&kron(&id, h.matrix()));
        cost = cost.add(&diff.matmul(&diff));
    }
    Ok(cost.hermitian_part())
}

/// `Σ_n (H_n⊗𝟙 − 𝟙⊗H_n)²`.
pub fn cost_gmpc(hs: &[Observable]) -> Result<ComplexMatrix> {
    squared_difference_sum(hs, false)
}

/// `Σ_n (H_nᵀ⊗𝟙 − 𝟙⊗H_n)²`.
pub fn cost_dpt(hs: &[Observable]) -> Result<ComplexMatrix> {
    squared_difference_sum(hs, true)
}

fn check_state_dims(rho: &DensityMatrix, sigma: &DensityMatrix, d: usize) -> Result<()> {
    for s in [rho, sigma] {
        if s.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: s.dim(),
            });
        }
    }
    Ok(())
}

/// Squared distance under either definition.
pub fn distance_squared(
    definition: Definition,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    hs: &[Observable],
    opts: &SolverOptions,
) -> Result<DistanceResult> {
    let d = common_dim(hs)?;
    check_state_dims(rho, sigma, d)?;
    let (cost, first) = match definition {
        Definition::Gmpc => (cost_gmpc(hs)?, rho.clone()),
        Definition::Dpt => (cost_dpt(hs)?, rho.transpose()),
    };
    let problem = SdpProblem::new(cost, first, sigma.clone())?;
    let solution = solve_coupling(&problem, opts)?;
    Ok(DistanceResult {
        d_squared: solution.primal_value / 2.0,
        definition,
        operators: hs.to_vec(),
        solution,
    })
}

pub fn d2_gmpc(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    hs: &[Observable],
    opts: &SolverOptions,
) -> Result<DistanceResult> {
    distance_squared(Definition::Gmpc, rho, sigma, hs, opts)
}

pub fn d2_dpt(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    hs: &[Observable],
    opts: &SolverOptions,
) -> Result<DistanceResult> {
    distance_squared(Definition::Dpt, rho, sigma, hs, opts)
}

/// DPT self-distance in closed form: `Σ_n I_ρ(H_n)`.
pub fn self_distance_closed(rho: &DensityMatrix, hs: &[Observable]) -> Result<f64> {
    common_dim(hs)?;
    hs.iter().map(|h| skew_information(rho, h)).sum()
}

/// Cost of the product coupling `ρ⊗σ` under the GMPC definition:
/// `½ Σ_n [Var_ρ(H_n) + Var_σ(H_n) + (⟨H_n⟩_ρ − ⟨H_n⟩_σ)²]`.
pub fn product_bound(rho: &DensityMatrix, sigma: &DensityMatrix, hs: &[Observable]) -> Result<f64> {
    let d = common_dim(hs)?;
    check_state_dims(rho, sigma, d)?;
    let mut acc = 0.0;
    for h in hs {
        let shift = expectation(rho, h)? - expectation(sigma, h)?;
        acc += variance(rho, h)? + variance(sigma, h)? + shift * shift;
    }
    Ok(0.5 * acc)
}

/// `¼ Σ_n F_Q[ρ, H_n]`, an upper bound on the GMPC self-distance.
pub fn qfi_bound(rho: &DensityMatrix, hs: &[Observable]) -> Result<f64> {
    common_dim(hs)?;
    let total: f64 = hs.iter().map(|h| qfi(rho, h)).sum::<Result<f64>>()?;
    Ok(0.25 * total)
}

/// A unitary that turns a qubit state and a qubit observable real at once.
#[derive(Debug, Clone)]
pub struct RealifyResult {
    /// `U = W·V†`.
    pub u: ComplexMatrix,
    /// `UρU†`, diagonal.
    pub rho_real: ComplexMatrix,
    /// `UHU†`.
    pub h_real: ComplexMatrix,
    pub rho_imag_residual: f64,
    pub h_imag_residual: f64,
    /// Angle of `W = exp(−iφσ_z/2)`.
    pub phi: f64,
}

/// Below this, `h_y` already vanishes and no z-rotation is applied.
const REALIFY_ZERO: f64 = 1e-13;

fn z_rotation(phi: f64) -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(2);
    w[(0, 0)] = C64::from_polar(1.0, -phi / 2.0);
    w[(1, 1)] = C64::from_polar(1.0, phi / 2.0);
    w
}

/// Diagonalize `ρ` with `V`, then rotate about z so that the observable loses
/// its `σ_y` component.
pub fn realify_qubit(rho: &DensityMatrix, h: &Observable) -> Result<RealifyResult> {
    if rho.dim() != 2 || h.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: if rho.dim() != 2 { rho.dim() } else { h.dim() },
        });
    }
    let v = hermitian_eig(rho.matrix())?.eigenvectors;
    let vd = v.adjoint();
    let h2 = Observable::new(h.matrix().conjugate_by(&vd))?;
    let (_, hv) = bloch_of_observable(&h2)?;

    let phi = if hv[1].abs() <= REALIFY_ZERO {
        0.0
    } else {
        // The rotation sense of W depends on convention; try both signs and
        // keep the one that actually kills Tr(H₃σ_y).
        let theta = hv[1].atan2(hv[0]);
        let y_part = |phi: f64| {
            let h3 = h2.matrix().conjugate_by(&z_rotation(phi));
            trace_prod(&h3, &pauli::y()).expect("2x2").norm()
        };
        let mut best = theta;
        for cand in [-theta, theta] {
            if y_part(cand) < y_part(best) {
                best = cand;
            }
        }
        normalize_angle(best)
    };

    let u = z_rotation(phi).matmul(&vd);
    let rho_real = rho.matrix().conjugate_by(&u);
    let h_real = h.matrix().conjugate_by(&u);
    Ok(RealifyResult {
        rho_imag_residual: rho_real.max_abs_imag(),
        h_imag_residual: h_real.max_abs_imag(),
        u,
        rho_real,
        h_real,
        phi,
    })
}

fn normalize_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundVariant {
    /// `min Tr[−Σ H_nᵀ⊗H_n X]` with marginals `(ρᵀ, ρ)`; any dimension.
    Transposed,
    /// `min Tr[−H⊗H X]` with marginals `(ρ, ρ)`; qubits and one operator.
    Plain,
}

#[derive(Debug, Clone)]
pub struct GroundEnergy {
    /// Solver minimum.
    pub lhs: f64,
    /// `Σ_n I_ρ(H_n) − ⟨H_n²⟩_ρ`.
    pub rhs: f64,
    pub solution: SdpSolution,
}

/// Minimum energy of `−Σ H_nᵀ⊗H_n` (or `−H⊗H`) over couplings of `ρ` with
/// itself, next to its skew-information closed form.
pub fn ground_energy_sdp(
    rho: &DensityMatrix,
    hs: &[Observable],
    variant: GroundVariant,
    opts: &SolverOptions,
) -> Result<GroundEnergy> {
    let d = common_dim(hs)?;
    check_state_dims(rho, rho, d)?;
    if variant == GroundVariant::Plain && (hs.len() != 1 || d != 2) {
        return Err(Error::InvalidInput(
            "the untransposed ground-energy identity holds for one qubit operator only".into(),
        ));
    }
    let mut cost = ComplexMatrix::zeros(d * d);
    for h in hs {
        let left = match variant {
            GroundVariant::Transposed => h.matrix().transpose(),
            GroundVariant::Plain => h.matrix().clone(),
        };
        cost.axpy(-1.0, &kron(&left, h.matrix()));
    }
    let first = match variant {
        GroundVariant::Transposed => rho.transpose(),
        GroundVariant::Plain => rho.clone(),
    };
    let problem = SdpProblem::new(cost, first, rho.clone())?;
    let solution = solve_coupling(&problem, opts)?;
    let mut rhs = 0.0;
    for h in hs {
        rhs += skew_information(rho, h)? - trace_prod(&h.square(), rho.matrix())?.re;
    }
    Ok(GroundEnergy {
        lhs: solution.primal_value,
        rhs,
        solution,
    })
}

/// Signed gaps of the transpose and covariance relations between the two
/// distances. Relations whose hypothesis does not hold are `None`.
#[derive(Debug, Clone)]
pub struct TransposeReport {
    /// `D_GMPC(ρ,σ)² − D_DPT(ρᵀ,σ)²`, when every `H_n` is real.
    pub real_operators_gap: Option<f64>,
    /// `D_GMPC(ρ,σ)² − D_DPT(ρ,σ)²`, when `ρ` is real and either every
    /// `H_n` is real or the instance is a qubit with one operator. Outside
    /// those cases the two distances of a real state can differ.
    pub real_state_gap: Option<f64>,
    /// `D_GMPC^{UHU†}(UρU†,UσU†)² − D_GMPC^{H}(ρ,σ)²`.
    pub covariance_gap: f64,
    /// Every distance solved along the way.
    pub solves: Vec<DistanceResult>,
}

/// Realness threshold for the hypotheses of the transpose relations.
const REAL_TOL: f64 = 1e-14;

pub fn verify_transpose_relations(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    hs: &[Observable],
    u: &ComplexMatrix,
    opts: &SolverOptions,
) -> Result<TransposeReport> {
    let d = common_dim(hs)?;
    if u.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: u.dim(),
        });
    }
    let gmpc = d2_gmpc(rho, sigma, hs, opts)?;
    let mut solves = Vec::new();

    let real_ops = hs.iter().all(|h| h.is_real(REAL_TOL));
    let real_operators_gap = if real_ops {
        let dpt = d2_dpt(&rho.transpose(), sigma, hs, opts)?;
        let gap = gmpc.d_squared - dpt.d_squared;
        solves.push(dpt);
        Some(gap)
    } else {
        None
    };
    let real_state_gap = if rho.matrix().is_real(REAL_TOL) && (real_ops || (d == 2 && hs.len() == 1)) {
        let dpt = d2_dpt(rho, sigma, hs, opts)?;
        let gap = gmpc.d_squared - dpt.d_squared;
        solves.push(dpt);
        Some(gap)
    } else {
        None
    };

    let hs_rot: Vec<Observable> = hs.iter().map(|h| h.conjugate_by(u)).collect();
    let rotated = d2_gmpc(&rho.conjugate_by(u), &sigma.conjugate_by(u), &hs_rot, opts)?;
    let covariance_gap = rotated.d_squared - gmpc.d_squared;
    solves.push(rotated);
    solves.insert(0, gmpc);

    Ok(TransposeReport {
        real_operators_gap,
        real_state_gap,
        covariance_gap,
        solves,
    })
}

/// The four distances of the qubit equality chain
/// `D_DPT^{H}(ρ,σ) = D_DPT^{UHU†}(UρU†,UσU†) = D_GMPC^{UHU†}(UρU†,UσU†) = D_GMPC^{H}(ρ,σ)`
/// with `U` from [`realify_qubit`].
#[derive(Debug, Clone)]
pub struct EqualityChain {
    pub dpt: DistanceResult,
    pub dpt_rotated: DistanceResult,
    pub gmpc_rotated: DistanceResult,
    pub gmpc: DistanceResult,
    pub realify: RealifyResult,
}

impl EqualityChain {
    pub fn values(&self) -> [f64; 4] {
        [
            self.dpt.d_squared,
            self.dpt_rotated.d_squared,
            self.gmpc_rotated.d_squared,
            self.gmpc.d_squared,
        ]
    }

    /// Largest pairwise difference along the chain.
    pub fn spread(&self) -> f64 {
        let v = self.values();
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }
}

pub fn qubit_equality_chain(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    h: &Observable,
    opts: &SolverOptions,
) -> Result<EqualityChain> {
    let realify = realify_qubit(rho, h)?;
    let u = &realify.u;
    let hs = std::slice::from_ref(h);
    let hs_rot = [h.conjugate_by(u)];
    let (rho_rot, sigma_rot) = (rho.conjugate_by(u), sigma.conjugate_by(u));
    Ok(EqualityChain {
        dpt: d2_dpt(rho, sigma, hs, opts)?,
        dpt_rotated: d2_dpt(&rho_rot, &sigma_rot, &hs_rot, opts)?,
        gmpc_rotated: d2_gmpc(&rho_rot, &sigma_rot, &hs_rot, opts)?,
        gmpc: d2_gmpc(rho, sigma, hs, opts)?,
        realify,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{random_hermitian, random_mixed, trial_rng};

    fn obs(m: ComplexMatrix) -> Observable {
        Observable::new(m).unwrap()
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5])).unwrap()
    }

    #[test]
    fn cost_examples() {
        let z = [obs(pauli::z())];
        let c = cost_gmpc(&z).unwrap();
        assert_eq!(c, ComplexMatrix::from_diag(&[0.0, 4.0, 4.0, 0.0]));
        assert_eq!(cost_dpt(&z).unwrap(), c);

        // σ_yᵀ = −σ_y, so the DPT cost is (−σ_y⊗𝟙 − 𝟙⊗σ_y)²
        let y = [obs(pauli::y())];
        let id = ComplexMatrix::identity(2);
        let diff = kron(&pauli::y(), &id).scale(-1.0).sub(&kron(&id, &pauli::y()));
        let expect = diff.matmul(&diff);
        assert!(cost_dpt(&y).unwrap().sub(&expect).frobenius_norm() < 1e-15);
        assert!(cost_gmpc(&y).unwrap().sub(&expect).frobenius_norm() > 1.0);
    }

    #[test]
    fn cost_errors() {
        assert!(cost_gmpc(&[]).is_err());
        let mixed = [obs(pauli::z()), obs(ComplexMatrix::identity(3))];
        assert!(matches!(
            cost_dpt(&mixed),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn closed_forms() {
        let z = obs(pauli::z());
        let x = obs(pauli::x());
        let rho = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let sd = self_distance_closed(&rho, &[x.clone(), z.clone()]).unwrap();
        assert!((sd - 0.4).abs() < 1e-14);
        assert!((qfi_bound(&rho, &[x.clone()]).unwrap() - 0.64).abs() < 1e-13);
        assert_eq!(self_distance_closed(&DensityMatrix::maximally_mixed(3), &[obs(ComplexMatrix::from_diag(&[1.0, 0.0, -1.0]))]).unwrap(), 0.0);

        assert!((product_bound(&plus(), &plus(), &[z.clone()]).unwrap() - 1.0).abs() < 1e-14);
        let k0 = DensityMatrix::basis(2, 0);
        let k1 = DensityMatrix::basis(2, 1);
        assert_eq!(product_bound(&k0, &k1, &[z.clone()]).unwrap(), 2.0);
        assert!((qfi_bound(&plus(), &[z]).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn realify_examples() {
        let rho = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let h = obs(ComplexMatrix::from_real(2, &[0.2, -0.5, -0.5, -0.2]));
        let r = realify_qubit(&rho, &h).unwrap();
        assert_eq!(r.phi, 0.0);
        assert_eq!(r.u, ComplexMatrix::identity(2));

        let r = realify_qubit(&DensityMatrix::maximally_mixed(2), &obs(pauli::y())).unwrap();
        assert!(r.h_imag_residual <= 1e-11 && r.rho_imag_residual <= 1e-11);
        let to_x = r.h_real.sub(&pauli::x()).frobenius_norm();
        let to_minus_x = r.h_real.add(&pauli::x()).frobenius_norm();
        assert!(to_x.min(to_minus_x) <= 1e-11);
        assert!((r.phi.abs() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn realify_random_pairs() {
        let mut rng = trial_rng(21, 0);
        for _ in 0..200 {
            let rho = random_mixed(2, &mut rng);
            let h = random_hermitian(2, &mut rng);
            let r = realify_qubit(&rho, &h).unwrap();
            assert!(r.rho_imag_residual <= 1e-11);
            assert!(r.h_imag_residual <= 1e-11);
            assert!(r.rho_real[(0, 1)].norm() <= 1e-11);
            let unit = r.u.adjoint().matmul(&r.u).sub(&ComplexMatrix::identity(2));
            assert!(unit.frobenius_norm() <= 1e-12);
        }
    }

    #[test]
    fn plain_ground_energy_needs_one_qubit_operator() {
        let rho = DensityMatrix::maximally_mixed(2);
        let hs = [obs(pauli::z()), obs(pauli::x())];
        assert!(ground_energy_sdp(&rho, &hs, GroundVariant::Plain, &SolverOptions::default()).is_err());
    }
}
