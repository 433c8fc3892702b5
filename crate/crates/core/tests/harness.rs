use qwot::harness::*;

fn cfg(c: Campaign, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        trials,
        ..ExperimentConfig::new(c)
    }
}

#[test]
fn config_validation() {
    let c = Campaign::Selfdist;
    assert!(cfg(c, 1).validate(c).is_ok());
    assert!(cfg(c, 0).validate(c).is_err());
    assert!(ExperimentConfig { dim: 1, ..cfg(c, 1) }.validate(c).is_err());
    assert!(ExperimentConfig { tol_assert: 1e-9, ..cfg(c, 1) }.validate(c).is_err());
    assert!(ExperimentConfig { dim: 3, ..cfg(Campaign::Theorem1, 1) }.validate(Campaign::Theorem1).is_err());
    assert!(ExperimentConfig { n_ops: 2, ..cfg(Campaign::Bounds, 1) }.validate(Campaign::Bounds).is_err());
    assert!(ExperimentConfig { dim: 17, ..cfg(c, 1) }.validate(c).is_err());
    // realification makes no solver calls, so its tolerance may sit below the solver's
    assert!(cfg(Campaign::Lemma1, 1).validate(Campaign::Lemma1).is_ok());
}

#[test]
fn names_round_trip() {
    for c in Campaign::ALL {
        assert_eq!(Campaign::from_name(c.name()), Some(c));
    }
    assert_eq!(Ensemble::from_name("haar-pure"), Some(Ensemble::HaarPure));
    assert_eq!(Campaign::from_name("nope"), None);
}

#[test]
fn csv_layout() {
    let r = run_campaign(Campaign::Theorem1, &cfg(Campaign::Theorem1, 8)).unwrap();
    let csv = r.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let width = CSV_HEADER.split(',').count();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), width);
        assert_eq!(cells[0], i.to_string());
        assert_eq!(cells.last(), Some(&"pass"));
    }
    assert!(r.records.iter().all(|rec| rec.gap.is_some_and(f64::is_finite)));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn summary_json_fields() {
    let r = run_campaign(Campaign::Lemma1, &cfg(Campaign::Lemma1, 20)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.summary_json()).unwrap();
    assert_eq!(v["campaign"], "lemma1");
    assert_eq!(v["failures"], 0);
    assert_eq!(v["config"]["trials"], 20);
    assert!(v["max_gap"].as_f64().unwrap() <= 1e-11);
    assert!(v["mean_gap"].as_f64().unwrap() <= v["max_gap"].as_f64().unwrap());
}

#[test]
fn sequential_and_parallel_reports_are_identical() {
    for c in [Campaign::Theorem1, Campaign::Selfdist, Campaign::GroundEnergy] {
        let config = cfg(c, 12);
        let seq = run_campaign_with(c, &config, Execution::Sequential).unwrap();
        let par = run_campaign_with(c, &config, Execution::Parallel).unwrap();
        assert_eq!(seq.to_csv(), par.to_csv());
        assert_eq!(seq.summary_json(), par.summary_json());
    }
}

#[test]
fn seeds_change_inputs() {
    let a = run_campaign(Campaign::Lemma1, &cfg(Campaign::Lemma1, 4)).unwrap();
    let b = run_campaign(Campaign::Lemma1, &ExperimentConfig { seed: 43, ..cfg(Campaign::Lemma1, 4) }).unwrap();
    assert_ne!(a.records[0].input_hash, b.records[0].input_hash);
}

#[test]
fn assertion_failures_exit_one() {
    let c = Campaign::Lemma1;
    let r = run_campaign(c, &ExperimentConfig { tol_assert: 1e-30, ..cfg(c, 6) }).unwrap();
    assert!(r.summary.failures > 0);
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn nonconvergence_exits_two() {
    let c = Campaign::Selfdist;
    let config = ExperimentConfig {
        ensemble: Ensemble::GinibreMixed,
        dim: 3,
        max_iters: 2,
        ..cfg(c, 3)
    };
    let r = run_campaign(c, &config).unwrap();
    assert_eq!(r.summary.nonconverged, 3);
    assert_eq!(r.exit_code(), 2);
    assert!(r.records.iter().all(|rec| rec.status == TrialStatus::Nonconverged));
}

#[test]
fn ensembles_set_state_kinds() {
    let c = Campaign::Theorem1;
    let pure = run_campaign(c, &ExperimentConfig { ensemble: Ensemble::HaarPure, ..cfg(c, 4) }).unwrap();
    assert!(pure.records.iter().all(|r| r.states == "pure+pure" && r.pure_marginal));
    let mixed = run_campaign(c, &ExperimentConfig { ensemble: Ensemble::GinibreMixed, ..cfg(c, 4) }).unwrap();
    assert!(mixed.records.iter().all(|r| r.states == "mixed+mixed" && !r.pure_marginal));
    let both = run_campaign(c, &cfg(c, 4)).unwrap();
    let kinds: Vec<&str> = both.records.iter().map(|r| r.states.as_str()).collect();
    assert_eq!(kinds, ["mixed+mixed", "pure+mixed", "mixed+pure", "pure+pure"]);
}
