use std::fs;
use std::path::Path;

use qwot::harness::{run_campaign_with, Campaign, Ensemble, Execution, ExperimentConfig};
use qwot::linalg::ComplexMatrix;
use qwot::solver::SolverOptions;
use qwot::state::{
    random_hermitian, random_mixed, random_pure, trial_rng, DensityMatrix, MatrixJson, Observable,
};
use qwot::wasserstein::{distance_squared, Definition, DistanceResult};
use serde_json::{json, Value};

use crate::args::{
    CampaignArg, Command, DefinitionArg, DistanceArgs, EnsembleArg, Format, GenArgs, GenKind,
    SolverArgs, VerifyArgs,
};

pub const EXIT_NONCONVERGED: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_INVALID: u8 = 4;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn parse_error(message: String) -> Failure {
    Failure { code: EXIT_PARSE, message }
}

fn invalid(e: qwot::Error) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: e.to_string(),
    }
}

pub fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Distance(a) => distance(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
    }
}

fn solver_options(s: &SolverArgs) -> SolverOptions {
    SolverOptions {
        tol: s.tol,
        max_iters: s.max_iters,
        over_relax: s.over_relax,
        ..SolverOptions::default()
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| parse_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_error(format!("{}: {e}", path.display())))
}

fn matrix_from(v: Value, path: &Path) -> Result<ComplexMatrix, Failure> {
    let j: MatrixJson = serde_json::from_value(v)
        .map_err(|e| parse_error(format!("{}: not a matrix object: {e}", path.display())))?;
    ComplexMatrix::try_from(j).map_err(|e| parse_error(format!("{}: {e}", path.display())))
}

fn read_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let m = matrix_from(read_json(path)?, path)?;
    DensityMatrix::new(m).map_err(|e| Failure {
        code: EXIT_INVALID,
        message: format!("{}: {e}", path.display()),
    })
}

fn read_operators(path: &Path) -> Result<Vec<Observable>, Failure> {
    let items = match read_json(path)? {
        Value::Array(items) => items,
        single => vec![single],
    };
    items
        .into_iter()
        .map(|v| {
            let m = matrix_from(v, path)?;
            Observable::new(m).map_err(|e| Failure {
                code: EXIT_INVALID,
                message: format!("{}: {e}", path.display()),
            })
        })
        .collect()
}

fn distance(a: DistanceArgs) -> Result<u8, Failure> {
    let rho = read_state(&a.state_a)?;
    let sigma = read_state(&a.state_b)?;
    let hs = read_operators(&a.operators)?;
    let opts = solver_options(&a.solver);
    let defs: &[Definition] = match a.definition {
        DefinitionArg::Gmpc => &[Definition::Gmpc],
        DefinitionArg::Dpt => &[Definition::Dpt],
        DefinitionArg::Both => &[Definition::Gmpc, Definition::Dpt],
    };
    let results = defs
        .iter()
        .map(|&d| distance_squared(d, &rho, &sigma, &hs, &opts).map_err(invalid))
        .collect::<Result<Vec<DistanceResult>, _>>()?;

    match a.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for r in &results {
                obj.insert(
                    r.definition.name().to_string(),
                    json!({
                        "d2": r.d_squared,
                        "dual_bound": r.dual_bound(),
                        "gap": r.relative_gap(),
                        "iterations": r.solution.iterations,
                        "converged": r.converged(),
                    }),
                );
            }
            println!("{}", serde_json::to_string_pretty(&Value::Object(obj)).expect("plain data"));
        }
        Format::Csv => {
            println!("definition,d2,dual_bound,gap,iterations,converged");
            for r in &results {
                println!(
                    "{},{:.16e},{:.16e},{:.16e},{},{}",
                    r.definition.name(),
                    r.d_squared,
                    r.dual_bound(),
                    r.relative_gap(),
                    r.solution.iterations,
                    r.converged()
                );
            }
        }
    }
    Ok(if results.iter().all(|r| r.converged()) {
        0
    } else {
        EXIT_NONCONVERGED
    })
}

fn campaign(c: CampaignArg) -> Campaign {
    match c {
        CampaignArg::Theorem1 => Campaign::Theorem1,
        CampaignArg::Selfdist => Campaign::Selfdist,
        CampaignArg::Lemma1 => Campaign::Lemma1,
        CampaignArg::Bounds => Campaign::Bounds,
        CampaignArg::Transpose => Campaign::Transpose,
        CampaignArg::GroundEnergy => Campaign::GroundEnergy,
    }
}

fn verify(a: VerifyArgs) -> Result<u8, Failure> {
    let c = campaign(a.campaign);
    let cfg = ExperimentConfig {
        seed: a.seed,
        trials: a.trials,
        dim: a.dim,
        n_ops: a.n_ops,
        tol_solver: a.solver.tol,
        tol_assert: a.assert_tol.unwrap_or_else(|| c.default_assert_tol()),
        ensemble: match a.ensemble {
            EnsembleArg::HaarPure => Ensemble::HaarPure,
            EnsembleArg::GinibreMixed => Ensemble::GinibreMixed,
            EnsembleArg::Both => Ensemble::Both,
        },
        max_iters: a.solver.max_iters,
        over_relax: a.solver.over_relax,
    };
    let exec = if a.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let report = run_campaign_with(c, &cfg, exec).map_err(invalid)?;
    let (csv, summary) = (report.to_csv(), report.summary_json());

    if let Some(dir) = &a.out {
        let write = |name: String, body: &str| {
            fs::write(dir.join(&name), body).map_err(|e| Failure {
                code: EXIT_INVALID,
                message: format!("cannot write {}: {e}", dir.join(&name).display()),
            })
        };
        fs::create_dir_all(dir).map_err(|e| Failure {
            code: EXIT_INVALID,
            message: format!("cannot create {}: {e}", dir.display()),
        })?;
        write(format!("{}.csv", c.name()), &csv)?;
        write(format!("{}.json", c.name()), &summary)?;
    }
    match a.format {
        Format::Json => print!("{summary}"),
        Format::Csv => print!("{csv}"),
    }
    Ok(report.exit_code() as u8)
}

fn gen(a: GenArgs) -> Result<u8, Failure> {
    if a.dim < 2 {
        return Err(invalid(qwot::Error::InvalidInput(format!(
            "dim must be >= 2, got {}",
            a.dim
        ))));
    }
    let mut rng = trial_rng(a.seed, 0);
    let m = match a.kind {
        GenKind::Pure => random_pure(a.dim, &mut rng).into_matrix(),
        GenKind::Mixed => random_mixed(a.dim, &mut rng).into_matrix(),
        GenKind::Hermitian => random_hermitian(a.dim, &mut rng).matrix().clone(),
    };
    let j = MatrixJson::from(&m);
    println!("{}", serde_json::to_string(&j).expect("plain data"));
    Ok(0)
}
