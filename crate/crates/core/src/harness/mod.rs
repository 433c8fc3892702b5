//! Seeded verification campaigns.
//!
//! Each campaign draws independent random trials from per-trial RNG streams
//! (`seed ⊕ trial`), checks one identity or bound per trial and collects a
//! [`TrialRecord`] for each. Trials run on the rayon pool when the
//! `parallel` feature is on; records are sorted by trial index before they
//! are reported, so both execution modes produce the same bytes.

mod report;
mod trials;

pub use report::{CampaignReport, Summary, TrialRecord, TrialStatus, CSV_HEADER};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::{SolverOptions, MAX_JOINT_DIM};

/// `‖U†U − 𝟙‖_max` allowed in a realification trial. Imaginary residuals and
/// spectral errors are held to `tol_assert` instead.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Campaign {
    /// DPT and GMPC distances agree for qubits with one operator.
    Theorem1,
    /// DPT self-distance equals the summed skew information.
    Selfdist,
    /// Simultaneous realification of a qubit state and observable.
    Lemma1,
    /// GMPC distance under the QFI and product-coupling bounds.
    Bounds,
    /// Transpose relations between the two definitions, and unitary covariance.
    Transpose,
    /// Ground energy of `−Σ H_nᵀ⊗H_n` against its closed form.
    GroundEnergy,
}

impl Campaign {
    pub const ALL: [Campaign; 6] = [
        Campaign::Theorem1,
        Campaign::Selfdist,
        Campaign::Lemma1,
        Campaign::Bounds,
        Campaign::Transpose,
        Campaign::GroundEnergy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Campaign::Theorem1 => "theorem1",
            Campaign::Selfdist => "selfdist",
            Campaign::Lemma1 => "lemma1",
            Campaign::Bounds => "bounds",
            Campaign::Transpose => "transpose",
            Campaign::GroundEnergy => "ground-energy",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Whether the trials call the coupling solver.
    pub fn uses_solver(&self) -> bool {
        !matches!(self, Campaign::Lemma1)
    }

    /// Assertion tolerance used when none is given.
    pub fn default_assert_tol(&self) -> f64 {
        match self {
            Campaign::Lemma1 => 1e-11,
            _ => 1e-6,
        }
    }

    /// `(dim, n_ops)` the campaign is restricted to, if any.
    fn required_shape(&self) -> Option<(usize, usize)> {
        match self {
            Campaign::Theorem1 | Campaign::Lemma1 | Campaign::Bounds => Some((2, 1)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    HaarPure,
    GinibreMixed,
    /// Alternates pure and mixed states by trial index.
    Both,
}

impl Ensemble {
    pub fn name(&self) -> &'static str {
        match self {
            Ensemble::HaarPure => "haar-pure",
            Ensemble::GinibreMixed => "ginibre-mixed",
            Ensemble::Both => "both",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Ensemble::HaarPure, Ensemble::GinibreMixed, Ensemble::Both]
            .into_iter()
            .find(|e| e.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub dim: usize,
    pub n_ops: usize,
    pub tol_solver: f64,
    pub tol_assert: f64,
    pub ensemble: Ensemble,
    pub max_iters: usize,
    pub over_relax: f64,
}

impl ExperimentConfig {
    /// Defaults for `campaign`: seed 42, 100 trials, qubits, one operator.
    pub fn new(campaign: Campaign) -> Self {
        let solver = SolverOptions::default();
        Self {
            seed: 42,
            trials: 100,
            dim: 2,
            n_ops: 1,
            tol_solver: solver.tol,
            tol_assert: campaign.default_assert_tol(),
            ensemble: Ensemble::Both,
            max_iters: solver.max_iters,
            over_relax: solver.over_relax,
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol_solver,
            max_iters: self.max_iters,
            over_relax: self.over_relax,
            ..SolverOptions::default()
        }
    }

    pub fn validate(&self, campaign: Campaign) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.trials < 1 {
            return bad("trials must be >= 1".into());
        }
        if self.dim < 2 {
            return bad(format!("dim must be >= 2, got {}", self.dim));
        }
        if self.dim * self.dim > MAX_JOINT_DIM {
            return bad(format!("dim {} exceeds the solver limit", self.dim));
        }
        if self.n_ops < 1 {
            return bad("n-ops must be >= 1".into());
        }
        if !(self.tol_assert > 0.0) {
            return bad(format!("assert tolerance must be positive, got {:e}", self.tol_assert));
        }
        if campaign.uses_solver() && !(self.tol_assert > self.tol_solver) {
            return bad(format!(
                "assert tolerance {:e} must exceed solver tolerance {:e}",
                self.tol_assert, self.tol_solver
            ));
        }
        if let Some((d, n)) = campaign.required_shape() {
            if self.dim != d || self.n_ops != n {
                return bad(format!(
                    "{} runs on dim {d} with {n} operator(s), got dim {} and {}",
                    campaign.name(),
                    self.dim,
                    self.n_ops
                ));
            }
        }
        self.solver_options().validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool; runs sequentially when built without `parallel`.
    Parallel,
}

/// Runs a campaign with the default execution mode of this build.
pub fn run_campaign(campaign: Campaign, cfg: &ExperimentConfig) -> Result<CampaignReport> {
    run_campaign_with(campaign, cfg, Execution::Parallel)
}

pub fn run_campaign_with(
    campaign: Campaign,
    cfg: &ExperimentConfig,
    exec: Execution,
) -> Result<CampaignReport> {
    cfg.validate(campaign)?;
    let run = |t: usize| trials::run_trial(campaign, cfg, t as u64);
    let mut records: Vec<TrialRecord> = match exec {
        Execution::Sequential => (0..cfg.trials).map(run).collect(),
        Execution::Parallel => parallel_map(cfg.trials, run),
    };
    records.sort_by_key(|r| r.trial);
    Ok(CampaignReport::new(campaign, cfg.clone(), records))
}

#[cfg(feature = "parallel")]
fn parallel_map(n: usize, f: impl Fn(usize) -> TrialRecord + Sync + Send) -> Vec<TrialRecord> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map(n: usize, f: impl Fn(usize) -> TrialRecord) -> Vec<TrialRecord> {
    (0..n).map(f).collect()
}
