//! One trial of each campaign.

use sha2::{Digest, Sha256};

use super::report::{TrialRecord, TrialStatus};
use super::{Campaign, Ensemble, ExperimentConfig, UNITARITY_TOL};
use crate::error::Result;
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::solver::SdpSolution;
use crate::state::{
    random_hermitian, random_mixed, random_pure, random_real_hermitian, random_real_mixed,
    random_real_pure, random_unitary, trial_rng, DensityMatrix, Observable, TrialRng,
};
use crate::wasserstein::{
    d2_dpt, d2_gmpc, ground_energy_sdp, product_bound, qfi_bound, realify_qubit,
    self_distance_closed, verify_transpose_relations, DistanceResult, GroundVariant,
};

/// What a trial found, before the pass/fail decision.
#[derive(Default)]
struct Outcome {
    d2_gmpc: Option<f64>,
    d2_dpt: Option<f64>,
    d2_self: Option<f64>,
    closed_form: Option<f64>,
    bound: Option<f64>,
    ground_lhs: Option<f64>,
    gap: f64,
    /// Set by lemma1 only.
    unitarity: Option<f64>,
    solves: Tally,
}

#[derive(Default)]
struct Tally {
    count: usize,
    iterations: usize,
    nonconverged: usize,
    cert_gap: f64,
}

impl Tally {
    fn add(&mut self, s: &SdpSolution) {
        self.count += 1;
        self.iterations += s.iterations;
        if !s.converged {
            self.nonconverged += 1;
        }
        self.cert_gap = self.cert_gap.max(s.relative_gap().abs());
    }

    fn distance(&mut self, r: DistanceResult) -> f64 {
        self.add(&r.solution);
        r.d_squared
    }
}

/// Which of the (up to two) drawn states are pure.
fn purity_pattern(ens: Ensemble, trial: u64) -> [bool; 2] {
    match ens {
        Ensemble::HaarPure => [true, true],
        Ensemble::GinibreMixed => [false, false],
        Ensemble::Both => [trial & 1 == 1, trial & 2 == 2],
    }
}

fn draw(pure: bool, real: bool, d: usize, rng: &mut TrialRng) -> DensityMatrix {
    match (pure, real) {
        (true, false) => random_pure(d, rng),
        (false, false) => random_mixed(d, rng),
        (true, true) => random_real_pure(d, rng),
        (false, true) => random_real_mixed(d, rng),
    }
}

fn label(pure: &[bool]) -> String {
    pure.iter()
        .map(|&p| if p { "pure" } else { "mixed" })
        .collect::<Vec<_>>()
        .join("+")
}

fn hash_inputs(mats: &[&ComplexMatrix]) -> String {
    let mut h = Sha256::new();
    for m in mats {
        for z in m.as_slice() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn observables(n: usize, d: usize, real: bool, rng: &mut TrialRng) -> Vec<Observable> {
    (0..n)
        .map(|_| {
            if real {
                random_real_hermitian(d, rng)
            } else {
                random_hermitian(d, rng)
            }
        })
        .collect()
}

struct Inputs {
    states: Vec<bool>,
    mats: Vec<ComplexMatrix>,
}

impl Inputs {
    fn new() -> Self {
        Self { states: Vec::new(), mats: Vec::new() }
    }

    fn state(&mut self, pure: bool, real: bool, d: usize, rng: &mut TrialRng) -> DensityMatrix {
        let s = draw(pure, real, d, rng);
        self.states.push(pure);
        self.mats.push(s.matrix().clone());
        s
    }

    fn ops(&mut self, n: usize, d: usize, real: bool, rng: &mut TrialRng) -> Vec<Observable> {
        let hs = observables(n, d, real, rng);
        self.mats.extend(hs.iter().map(|h| h.matrix().clone()));
        hs
    }
}

pub(super) fn run_trial(c: Campaign, cfg: &ExperimentConfig, trial: u64) -> TrialRecord {
    let mut rng = trial_rng(cfg.seed, trial);
    let mut inputs = Inputs::new();
    let pattern = purity_pattern(cfg.ensemble, trial);
    let result = match c {
        Campaign::Theorem1 => theorem1(cfg, pattern, &mut rng, &mut inputs),
        Campaign::Selfdist => selfdist(cfg, pattern, &mut rng, &mut inputs),
        Campaign::Lemma1 => lemma1(cfg, pattern, &mut rng, &mut inputs),
        Campaign::Bounds => bounds(cfg, pattern, &mut rng, &mut inputs),
        Campaign::Transpose => transpose(cfg, pattern, &mut rng, &mut inputs),
        Campaign::GroundEnergy => ground_energy(cfg, pattern, &mut rng, &mut inputs),
    };
    let mat_refs: Vec<&ComplexMatrix> = inputs.mats.iter().collect();
    let mut rec = TrialRecord {
        trial,
        campaign: c,
        states: label(&inputs.states),
        dim: cfg.dim,
        n_ops: cfg.n_ops,
        input_hash: hash_inputs(&mat_refs),
        d2_gmpc: None,
        d2_dpt: None,
        d2_self: None,
        closed_form: None,
        bound: None,
        ground_lhs: None,
        gap: None,
        cert_gap: None,
        iterations: 0,
        converged: true,
        pure_marginal: inputs.states.iter().any(|&p| p),
        status: TrialStatus::Error,
        message: None,
    };
    let o = match result {
        Ok(o) => o,
        Err(e) => {
            rec.converged = false;
            rec.message = Some(e.to_string());
            return rec;
        }
    };
    rec.d2_gmpc = o.d2_gmpc;
    rec.d2_dpt = o.d2_dpt;
    rec.d2_self = o.d2_self;
    rec.closed_form = o.closed_form;
    rec.bound = o.bound;
    rec.ground_lhs = o.ground_lhs;
    rec.gap = Some(o.gap);
    rec.iterations = o.solves.iterations;
    rec.converged = o.solves.nonconverged == 0;
    if o.solves.count > 0 {
        rec.cert_gap = Some(o.solves.cert_gap);
    }
    let within = o.gap.is_finite()
        && o.gap <= cfg.tol_assert
        && o.solves.cert_gap <= cfg.tol_assert
        && o.unitarity.is_none_or(|u| u <= UNITARITY_TOL);
    rec.status = if !rec.converged {
        TrialStatus::Nonconverged
    } else if within {
        TrialStatus::Pass
    } else {
        TrialStatus::Fail
    };
    rec
}

fn theorem1(
    cfg: &ExperimentConfig,
    pure: [bool; 2],
    rng: &mut TrialRng,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let opts = cfg.solver_options();
    let rho = inputs.state(pure[0], false, cfg.dim, rng);
    let sigma = inputs.state(pure[1], false, cfg.dim, rng);
    let hs = inputs.ops(cfg.n_ops, cfg.dim, false, rng);
    let mut o = Outcome::default();
    let g = o.solves.distance(d2_gmpc(&rho, &sigma, &hs, &opts)?);
    let p = o.solves.distance(d2_dpt(&rho, &sigma, &hs, &opts)?);
    let pb = product_bound(&rho, &sigma, &hs)?;
    o.gap = (p - g).abs();
    if pure[0] || pure[1] {
        // the only coupling is the product state
        o.closed_form = Some(pb);
        o.gap = o.gap.max((g - pb).abs()).max((p - pb).abs());
    }
    o.d2_gmpc = Some(g);
    o.d2_dpt = Some(p);
    o.bound = Some(pb);
    Ok(o)
}

fn selfdist(
    cfg: &ExperimentConfig,
    pure: [bool; 2],
    rng: &mut TrialRng,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let rho = inputs.state(pure[0], false, cfg.dim, rng);
    let hs = inputs.ops(cfg.n_ops, cfg.dim, false, rng);
    let mut o = Outcome::default();
    let p = o.solves.distance(d2_dpt(&rho, &rho, &hs, &cfg.solver_options())?);
    let cf = self_distance_closed(&rho, &hs)?;
    o.gap = (p - cf).abs();
    o.d2_self = Some(p);
    o.closed_form = Some(cf);
    o.bound = Some(qfi_bound(&rho, &hs)?);
    Ok(o)
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn spectral_error(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let ea = hermitian_eig(a)?.eigenvalues;
    let eb = hermitian_eig(b)?.eigenvalues;
    Ok(ea.iter().zip(&eb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

fn lemma1(
    cfg: &ExperimentConfig,
    pure: [bool; 2],
    rng: &mut TrialRng,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let rho = inputs.state(pure[0], false, cfg.dim, rng);
    let h = inputs.ops(1, cfg.dim, false, rng).remove(0);
    let r = realify_qubit(&rho, &h)?;
    let unitarity = max_abs(&r.u.adjoint().matmul(&r.u).sub(&ComplexMatrix::identity(2)));
    let off_diagonal = r.rho_real[(0, 1)].norm().max(r.rho_real[(1, 0)].norm());
    let gap = [
        r.rho_imag_residual,
        r.h_imag_residual,
        off_diagonal,
        spectral_error(&r.rho_real, rho.matrix())?,
        spectral_error(&r.h_real, h.matrix())?,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(Outcome {
        gap,
        bound: Some(unitarity),
        unitarity: Some(unitarity),
        ..Outcome::default()
    })
}

fn bounds(
    cfg: &ExperimentConfig,
    pure: [bool; 2],
    rng: &mut TrialRng,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let opts = cfg.solver_options();
    let rho = inputs.state(pure[0], false, cfg.dim, rng);
    let sigma = inputs.state(pure[1], false, cfg.dim, rng);
    let hs = inputs.ops(cfg.n_ops, cfg.dim, false, rng);
    let mut o = Outcome::default();
    let own = o.solves.distance(d2_gmpc(&rho, &rho, &hs, &opts)?);
    let cross = o.solves.distance(d2_gmpc(&rho, &sigma, &hs, &opts)?);
    let qb = qfi_bound(&rho, &hs)?;
    let pb = product_bound(&rho, &sigma, &hs)?;
    // gap is the amount by which either bound is exceeded
    o.gap = (own - qb).max(cross - pb).max(0.0);
    o.d2_self = Some(own);
    o.d2_gmpc = Some(cross);
    o.closed_form = Some(qb);
    o.bound = Some(pb);
    Ok(o)
}

fn transpose(
    cfg: &ExperimentConfig,
    pure: [bool; 2],
    rng: &mut TrialRng,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let opts = cfg.solver_options();
    let d = cfg.dim;
    let mut o = Outcome::default();

    // real operators, complex states
    let rho = inputs.state(pure[0], false, d, rng);
    let sigma = inputs.state(pure[1], false, d, rng);
    let hs = inputs.ops(cfg.n_ops, d, true, rng);
    let u = random_unitary(d, rng);
    inputs.mats.push(u.clone());
    let a = verify_transpose_relations(&rho, &sigma, &hs, &u, &opts)?;

    // real states; the operators may be complex only for a single qubit
    // operator, where the two distances coincide for every state
    let rho_r = inputs.state(pure[0], true, d, rng);
    let sigma_r = inputs.state(pure[1], true, d, rng);
    let qubit_single = d == 2 && cfg.n_ops == 1;
    let hs_c = inputs.ops(cfg.n_ops, d, !qubit_single, rng);
    let v = random_unitary(d, rng);
    inputs.mats.push(v.clone());
    let b = verify_transpose_relations(&rho_r, &sigma_r, &hs_c, &v, &opts)?;

    let mut gap: f64 = 0.0;
    for report in [&a, &b] {
        for s in &report.solves {
            o.solves.add(&s.solution);
        }
        for g in [report.real_operators_gap, report.real_state_gap, Some(report.covariance_gap)]
            .into_iter()
            .flatten()
        {
            gap = gap.max(g.abs());
        }
    }
    // both hypotheses must actually have been exercised
    if a.real_operators_gap.is_none() || b.real_state_gap.is_none() {
        gap = f64::INFINITY;
    }
    o.gap = gap;
    o.d2_gmpc = Some(a.solves[0].d_squared);
    o.d2_dpt = Some(a.solves[1].d_squared);
    Ok(o)
}

fn ground_energy(
    cfg: &ExperimentConfig,
    pure: [bool; 2],
    rng: &mut TrialRng,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let opts = cfg.solver_options();
    let rho = inputs.state(pure[0], false, cfg.dim, rng);
    let hs = inputs.ops(cfg.n_ops, cfg.dim, false, rng);
    let mut o = Outcome::default();
    let t = ground_energy_sdp(&rho, &hs, GroundVariant::Transposed, &opts)?;
    o.solves.add(&t.solution);
    o.gap = (t.lhs - t.rhs).abs();
    if cfg.dim == 2 && cfg.n_ops == 1 {
        let p = ground_energy_sdp(&rho, &hs, GroundVariant::Plain, &opts)?;
        o.solves.add(&p.solution);
        o.gap = o.gap.max((p.lhs - p.rhs).abs());
    }
    o.ground_lhs = Some(t.lhs);
    o.closed_form = Some(t.rhs);
    Ok(o)
}
