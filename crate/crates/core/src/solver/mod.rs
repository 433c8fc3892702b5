//! Minimize `Tr(C·X)` over bipartite density matrices `X` with prescribed
//! marginals `Tr₂X = A`, `Tr₁X = B`, and certify the result with a dual
//! bound.
//!
//! The solver is an over-relaxed ADMM (alternating-direction) iteration on
//! the real symmetric embedding of the Hermitian problem. Each step
//! alternates the closed-form projection onto the marginal constraints with
//! the projection onto the PSD cone (eigenvalue clipping). The penalty
//! starts at `‖C‖_F` and is rebalanced against the residuals as the
//! iteration proceeds. At exit the multipliers of the affine step give a
//! dual pair `(Y₁, Y₂)`, which is shifted to exact feasibility so that the
//! reported `dual_bound` is a valid lower bound.
//!
//! Rank-deficient marginals are handled by solving on the face
//! `supp(A) ⊗ supp(B)` (see [`RANK_TOL`]).

mod affine;
mod dual;
mod embed;
mod face;

pub use affine::{adjoint_map, affine_project, split_multipliers};
pub use dual::{dual_bound, DualCheck, DUAL_PSD_TOL};
pub use embed::{embed, unembed, Embedded};
pub use face::RANK_TOL;

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, trace_prod, ComplexMatrix, Subsystem};
use crate::state::{validate_density, DensityMatrix};
use embed::PsdProjector;
use face::Face;

/// Largest bipartite dimension `d²` accepted by the solver.
pub const MAX_JOINT_DIM: usize = 256;
/// Tolerance on `|Tr A − Tr B|` and on the hermiticity of the cost.
pub const PROBLEM_TOL: f64 = 1e-10;

/// The coupling problem: cost on `C^d ⊗ C^d` and the two marginal targets.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    cost: ComplexMatrix,
    marginal_1: DensityMatrix,
    marginal_2: DensityMatrix,
    face: Face,
}

impl SdpProblem {
    /// `marginal_1` is the target of `Tr₂X`, `marginal_2` the target of `Tr₁X`.
    pub fn new(
        cost: ComplexMatrix,
        marginal_1: DensityMatrix,
        marginal_2: DensityMatrix,
    ) -> Result<Self> {
        let d = marginal_1.dim();
        if marginal_2.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: marginal_2.dim(),
            });
        }
        if cost.dim() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: cost.dim(),
            });
        }
        if cost.dim() > MAX_JOINT_DIM {
            return Err(Error::InvalidInput(format!(
                "joint dimension {} exceeds {MAX_JOINT_DIM}",
                cost.dim()
            )));
        }
        let deviation = cost.hermitian_deviation();
        if deviation > PROBLEM_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tol: PROBLEM_TOL,
            });
        }
        let mismatch = (marginal_1.matrix().trace() - marginal_2.matrix().trace()).norm();
        if mismatch > PROBLEM_TOL {
            return Err(Error::InfeasibleMarginals(mismatch));
        }
        let face = Face::of(&marginal_1, &marginal_2)?;
        Ok(Self {
            cost: cost.hermitian_part(),
            marginal_1,
            marginal_2,
            face,
        })
    }

    pub fn cost(&self) -> &ComplexMatrix {
        &self.cost
    }

    pub fn marginal_1(&self) -> &DensityMatrix {
        &self.marginal_1
    }

    pub fn marginal_2(&self) -> &DensityMatrix {
        &self.marginal_2
    }

    pub fn marginal_dim(&self) -> usize {
        self.marginal_1.dim()
    }

    /// Numerical ranks of the two marginals.
    pub fn marginal_ranks(&self) -> (usize, usize) {
        self.face.ranks()
    }

    fn reduced(&self) -> Reduced {
        Reduced {
            cost: self.face.compress_joint(&self.cost).hermitian_part(),
            a: self.face.compress_1(self.marginal_1.matrix()).hermitian_part(),
            b: self.face.compress_2(self.marginal_2.matrix()).hermitian_part(),
        }
    }

    /// `(‖Tr₂X − A‖_F, ‖Tr₁X − B‖_F)`.
    pub fn marginal_residuals(&self, x: &ComplexMatrix) -> (f64, f64) {
        let d = self.marginal_dim();
        let r1 = partial_trace(x, Subsystem::Second, d)
            .expect("dims checked")
            .sub(self.marginal_1.matrix())
            .frobenius_norm();
        let r2 = partial_trace(x, Subsystem::First, d)
            .expect("dims checked")
            .sub(self.marginal_2.matrix())
            .frobenius_norm();
        (r1, r2)
    }

    pub fn objective(&self, x: &ComplexMatrix) -> f64 {
        trace_prod(&self.cost, x).expect("dims checked").re
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Target for the primal residual, dual residual and relative gap.
    pub tol: f64,
    pub max_iters: usize,
    /// ADMM over-relaxation factor in `(0, 2)`.
    pub over_relax: f64,
    /// Rebalance the penalty parameter from the residual ratio.
    pub adaptive_penalty: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iters: 200_000,
            over_relax: 1.6,
            adaptive_penalty: true,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.over_relax > 0.0 && self.over_relax < 2.0) {
            return Err(Error::InvalidInput(format!(
                "solver options out of range: tol {:e}, over-relax {}",
                self.tol, self.over_relax
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max-iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// A bipartite state with the marginal violations it was returned with.
#[derive(Debug, Clone)]
pub struct Coupling {
    pub mat: DensityMatrix,
    pub residual_1: f64,
    pub residual_2: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub coupling: Coupling,
    /// `Tr(C·X)` at the returned coupling.
    pub primal_value: f64,
    /// Certified lower bound `Tr(Y₁A) + Tr(Y₂B)`.
    pub dual_bound: f64,
    pub y1: ComplexMatrix,
    pub y2: ComplexMatrix,
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl SdpSolution {
    /// `(primal − dual) / max(1, |primal|)`.
    pub fn relative_gap(&self) -> f64 {
        (self.primal_value - self.dual_bound) / self.primal_value.abs().max(1.0)
    }
}

/// Solves the coupling problem from the product coupling `A⊗B`.
pub fn solve_coupling(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    let r = p.reduced();
    let start = kron(&r.a, &r.b);
    let raw = Admm::new(&r, opts, &start, None)?.run()?;
    finish(p, raw)
}

/// Restarts from a previous solution, reusing its coupling and its dual pair.
pub fn solve_coupling_from(
    p: &SdpProblem,
    opts: &SolverOptions,
    previous: &SdpSolution,
) -> Result<SdpSolution> {
    let n = p.cost.dim();
    if previous.coupling.mat.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: previous.coupling.mat.dim(),
        });
    }
    let r = p.reduced();
    let start = p.face.compress_joint(previous.coupling.mat.matrix());
    let s = p
        .face
        .compress_joint(&dual::slack(&p.cost, &previous.y1, &previous.y2));
    let raw = Admm::new(&r, opts, &start, Some(&s))?.run()?;
    finish(p, raw)
}

/// The problem compressed to the support face, with marginal dimensions
/// `a.dim()` and `b.dim()`.
struct Reduced {
    cost: ComplexMatrix,
    a: ComplexMatrix,
    b: ComplexMatrix,
}

/// Solver output on the reduced problem.
struct Raw {
    z: ComplexMatrix,
    y1: ComplexMatrix,
    y2: ComplexMatrix,
    iterations: usize,
    converged: bool,
    r_prim: f64,
    r_dual: f64,
}

fn finish(p: &SdpProblem, raw: Raw) -> Result<SdpSolution> {
    let x = p.face.expand_joint(&raw.z).hermitian_part();
    let y1 = p.face.expand_1(&raw.y1).hermitian_part();
    let y2 = p.face.expand_2(&raw.y2).hermitian_part();
    let primal_value = p.objective(&x);
    let dual_bound = dual::objective(p.marginal_1.matrix(), p.marginal_2.matrix(), &y1, &y2);
    let (residual_1, residual_2) = p.marginal_residuals(&x);
    let mat = match validate_density(&x, 1e-8) {
        Ok(m) => m,
        Err(_) if !raw.converged => DensityMatrix::new_unchecked(x),
        Err(e) => return Err(e),
    };
    Ok(SdpSolution {
        coupling: Coupling {
            mat,
            residual_1,
            residual_2,
        },
        primal_value,
        dual_bound,
        y1,
        y2,
        iterations: raw.iterations,
        converged: raw.converged,
        primal_residual: raw.r_prim,
        dual_residual: raw.r_dual,
    })
}

const BALANCE_EVERY: usize = 25;
const BALANCE_RATIO: f64 = 5.0;
// also checked on the first iteration, where a warm start may already be optimal
const CERTIFY_EVERY: usize = 25;

struct Admm<'a> {
    p: &'a Reduced,
    opts: SolverOptions,
    cost: Embedded,
    cost_norm: f64,
    rho: f64,
    z: Embedded,
    u: Embedded,
    proj: PsdProjector,
}

struct Certificate {
    y1: ComplexMatrix,
    y2: ComplexMatrix,
    bound: f64,
}

impl<'a> Admm<'a> {
    fn new(
        p: &'a Reduced,
        opts: &SolverOptions,
        start: &ComplexMatrix,
        start_slack: Option<&ComplexMatrix>,
    ) -> Result<Self> {
        opts.validate()?;
        let n = p.cost.dim();
        if start.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: start.dim(),
            });
        }
        let cost_norm = p.cost.frobenius_norm();
        let rho = if cost_norm > 0.0 { cost_norm } else { 1.0 };
        // scaled multiplier of X = Z is U = −S/ρ
        let u = match start_slack {
            Some(s) => embed(&s.scale(-1.0 / rho)),
            None => Embedded::zeros(n),
        };
        Ok(Self {
            p,
            opts: *opts,
            cost: embed(&p.cost),
            cost_norm,
            rho,
            z: embed(&start.hermitian_part()),
            u,
            proj: PsdProjector::new(n),
        })
    }

    fn affine(&self, v: &Embedded) -> Embedded {
        let x = affine_project(
            &unembed(v).hermitian_part(),
            &self.p.a,
            &self.p.b,
        )
        .expect("dims checked");
        embed(&x)
    }

    /// Dual pair from the affine-step multipliers `C + ρ(X − Z + U)`, repaired
    /// to feasibility.
    fn certificate(&self, x: &Embedded, z_prev: &Embedded, u_prev: &Embedded) -> Result<Certificate> {
        let mut m = Embedded::zeros(self.cost.complex_dim());
        for (((o, c), (xi, zi)), ui) in m
            .as_mut_slice()
            .iter_mut()
            .zip(self.cost.as_slice())
            .zip(x.as_slice().iter().zip(z_prev.as_slice()))
            .zip(u_prev.as_slice())
        {
            *o = c + self.rho * (xi - zi + ui);
        }
        let (y1, y2) = split_multipliers(&unembed(&m), self.p.a.dim(), self.p.b.dim())?;
        let (y1, y2) = dual::repair(&self.p.cost, y1, y2)?;
        let bound = dual::objective(&self.p.a, &self.p.b, &y1, &y2);
        Ok(Certificate { y1, y2, bound })
    }

    fn run(mut self) -> Result<Raw> {
        let n = self.cost.complex_dim();
        let alpha = self.opts.over_relax;
        let tol = self.opts.tol;
        let dual_tol = tol * self.cost_norm.max(1.0);

        let mut v = Embedded::zeros(n);
        let mut w = Embedded::zeros(n);
        let mut z_next = Embedded::zeros(n);
        let mut best: Option<(Certificate, Embedded, f64, f64, usize)> = None;

        for it in 1..=self.opts.max_iters {
            let inv_rho = 1.0 / self.rho;
            for (((o, z), u), c) in v
                .as_mut_slice()
                .iter_mut()
                .zip(self.z.as_slice())
                .zip(self.u.as_slice())
                .zip(self.cost.as_slice())
            {
                *o = z - u - c * inv_rho;
            }
            let x = self.affine(&v);

            for (((o, xi), zi), ui) in w
                .as_mut_slice()
                .iter_mut()
                .zip(x.as_slice())
                .zip(self.z.as_slice())
                .zip(self.u.as_slice())
            {
                *o = alpha * xi + (1.0 - alpha) * zi + ui;
            }
            self.proj.project(&w, &mut z_next);
            z_next = embed(&unembed(&z_next));

            let r_prim = x.complex_distance(&z_next);
            let r_dual = self.rho * self.z.complex_distance(&z_next);

            let check = (it == 1 || it % CERTIFY_EVERY == 0 || it == self.opts.max_iters)
                && r_prim <= tol
                && r_dual <= dual_tol;
            let mut done = false;
            if check || it == self.opts.max_iters {
                let cert = self.certificate(&x, &self.z, &self.u)?;
                let primal = self.cost.dot(&z_next) / 2.0;
                let excess = primal - cert.bound;
                // a bound above the primal value only comes from primal
                // infeasibility; keep that below tol in absolute terms
                done = check && excess <= tol * primal.abs().max(1.0) && -excess <= tol;
                best = Some((cert, z_next.clone(), r_prim, r_dual, it));
            }

            // u ← u + x_relaxed − z_next, with x_relaxed + u = w
            for ((ui, wi), zi) in self
                .u
                .as_mut_slice()
                .iter_mut()
                .zip(w.as_slice())
                .zip(z_next.as_slice())
            {
                *ui = wi - zi;
            }
            std::mem::swap(&mut self.z, &mut z_next);

            if done {
                return Ok(Self::raw(best.expect("set on check"), true));
            }

            if self.opts.adaptive_penalty && it % BALANCE_EVERY == 0 {
                let scale_p = r_prim / x.complex_norm().max(self.z.complex_norm()).max(1e-300);
                let scale_d = r_dual / (self.rho * self.u.complex_norm()).max(1e-300);
                let factor = if scale_p > BALANCE_RATIO * scale_d {
                    2.0
                } else if scale_d > BALANCE_RATIO * scale_p {
                    0.5
                } else {
                    1.0
                };
                if factor != 1.0 {
                    self.rho *= factor;
                    for ui in self.u.as_mut_slice() {
                        *ui /= factor;
                    }
                }
            }
        }
        let last = best.unwrap_or_else(|| unreachable!("certificate taken on final iteration"));
        Ok(Self::raw(last, false))
    }

    fn raw(
        (cert, z, r_prim, r_dual, iterations): (Certificate, Embedded, f64, f64, usize),
        converged: bool,
    ) -> Raw {
        Raw {
            z: unembed(&z).hermitian_part(),
            y1: cert.y1,
            y2: cert.y2,
            iterations,
            converged,
            r_prim,
            r_dual,
        }
    }
}
