//! Trial records, the CSV report and the JSON summary.
//!
//! CSV columns, in order (empty cell = not computed by this campaign):
//!
//! | column | meaning |
//! |---|---|
//! | `trial` | trial index; its RNG stream is `seed ⊕ trial` |
//! | `campaign` | campaign name |
//! | `states` | ensemble of each drawn state, joined by `+` |
//! | `dim`, `n_ops` | Hilbert-space dimension, number of operators |
//! | `input_hash` | first 16 hex digits of SHA-256 over the input matrices |
//! | `d2_gmpc`, `d2_dpt` | squared distances between the two drawn states |
//! | `d2_self` | squared self-distance of the first state |
//! | `closed_form` | closed-form value the solver is compared with |
//! | `bound` | upper bound on the distance (unitarity error for `lemma1`) |
//! | `ground_lhs` | ground-energy minimum found by the solver |
//! | `gap` | largest deviation of the checked relation |
//! | `cert_gap` | largest relative duality gap over the trial's solves |
//! | `iterations` | solver iterations summed over the trial |
//! | `converged` | every solve met the solver tolerance |
//! | `pure_marginal` | at least one drawn state is pure |
//! | `status` | `pass`, `fail`, `nonconverged` or `error` |
//!
//! Reals are written as `{:.16e}` (17 significant digits).

use serde::Serialize;

use super::{Campaign, ExperimentConfig};

pub const CSV_HEADER: &str = "trial,campaign,states,dim,n_ops,input_hash,d2_gmpc,d2_dpt,d2_self,\
closed_form,bound,ground_lhs,gap,cert_gap,iterations,converged,pure_marginal,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Pass,
    Fail,
    Nonconverged,
    Error,
}

impl TrialStatus {
    pub fn name(&self) -> &'static str {
        match self {
            TrialStatus::Pass => "pass",
            TrialStatus::Fail => "fail",
            TrialStatus::Nonconverged => "nonconverged",
            TrialStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub campaign: Campaign,
    pub states: String,
    pub dim: usize,
    pub n_ops: usize,
    pub input_hash: String,
    pub d2_gmpc: Option<f64>,
    pub d2_dpt: Option<f64>,
    pub d2_self: Option<f64>,
    pub closed_form: Option<f64>,
    pub bound: Option<f64>,
    pub ground_lhs: Option<f64>,
    /// `None` only when the trial errored.
    pub gap: Option<f64>,
    pub cert_gap: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub pure_marginal: bool,
    pub status: TrialStatus,
    /// Error text for `status == Error`; not part of the CSV.
    pub message: Option<String>,
}

fn real(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

impl TrialRecord {
    pub fn csv_row(&self) -> String {
        [
            self.trial.to_string(),
            self.campaign.name().to_string(),
            self.states.clone(),
            self.dim.to_string(),
            self.n_ops.to_string(),
            self.input_hash.clone(),
            real(self.d2_gmpc),
            real(self.d2_dpt),
            real(self.d2_self),
            real(self.closed_form),
            real(self.bound),
            real(self.ground_lhs),
            real(self.gap),
            real(self.cert_gap),
            self.iterations.to_string(),
            self.converged.to_string(),
            self.pure_marginal.to_string(),
            self.status.name().to_string(),
        ]
        .join(",")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialError {
    pub trial: u64,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub campaign: Campaign,
    pub config: ExperimentConfig,
    pub max_gap: f64,
    pub mean_gap: f64,
    pub max_cert_gap: f64,
    pub failures: usize,
    pub nonconverged: usize,
    pub failed_trials: Vec<u64>,
    pub errors: Vec<TrialError>,
    pub exit_code: i32,
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

impl CampaignReport {
    pub(crate) fn new(campaign: Campaign, config: ExperimentConfig, records: Vec<TrialRecord>) -> Self {
        let gaps: Vec<f64> = records.iter().filter_map(|r| r.gap).collect();
        let max_gap = gaps.iter().cloned().fold(0.0, f64::max);
        let mean_gap = if gaps.is_empty() {
            0.0
        } else {
            gaps.iter().sum::<f64>() / gaps.len() as f64
        };
        let max_cert_gap = records
            .iter()
            .filter_map(|r| r.cert_gap)
            .fold(0.0, f64::max);
        let count = |s: TrialStatus| records.iter().filter(|r| r.status == s).count();
        let failures = count(TrialStatus::Fail);
        let nonconverged = count(TrialStatus::Nonconverged);
        let errors: Vec<TrialError> = records
            .iter()
            .filter(|r| r.status == TrialStatus::Error)
            .map(|r| TrialError {
                trial: r.trial,
                message: r.message.clone().unwrap_or_default(),
            })
            .collect();
        let failed_trials = records
            .iter()
            .filter(|r| r.status != TrialStatus::Pass)
            .map(|r| r.trial)
            .collect();
        // a trial whose solves did not finish cannot confirm or refute the
        // identity, so non-convergence outranks assertion failures
        let exit_code = if nonconverged > 0 || !errors.is_empty() {
            2
        } else if failures > 0 {
            1
        } else {
            0
        };
        Self {
            records,
            summary: Summary {
                campaign,
                config,
                max_gap,
                mean_gap,
                max_cert_gap,
                failures,
                nonconverged,
                failed_trials,
                errors,
                exit_code,
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(256 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary is plain data") + "\n"
    }
}
