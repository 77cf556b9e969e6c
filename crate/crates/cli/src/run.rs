use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use wfdecide::closure::{
    confirm_minimal, decide, verify_round_reduction_proof, ClosureEngine, ClosureOptions, RoundReductionProof,
};
use wfdecide::complex::{parse_assignment, Vertex};
use wfdecide::covering::{
    covering_impossibility, gen_cyclic_cover, local_isomorphism_failures, parse_candidate_json, validate_covering,
    CoveringCandidate,
};
use wfdecide::flp::{
    flp_from_round_reduction, verify_transcript, FlpOutcome, HonestOracle, StubbornOracle, Transcript, ValencyOracle,
};
use wfdecide::solver::{t_round_solvable, Limits, SearchResult};
use wfdecide::task::{parse_task_json, task_to_json, validate_task, ColorlessTask, TaskId, TaskJson, ValidatedTask};

use crate::args::{Command, CoveringCommand, OracleKind, Report, TaskArgs};
use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(args: &TaskArgs) -> Result<ValidatedTask, CliError> {
    let raw = if args.task.starts_with("builtin:") {
        args.task.parse::<TaskId>()?.build()?
    } else {
        parse_task_json(&read(Path::new(&args.task))?).map_err(|e| CliError::Input(format!("{}: {e}", args.task)))?
    };
    let v = validate_task(&raw, args.mode.into())?;
    for w in &v.warnings {
        eprintln!("warning: {w}");
    }
    Ok(v)
}

fn load_candidate(spec: &str) -> Result<CoveringCandidate, CliError> {
    if spec.starts_with("builtin:") {
        let id: TaskId = spec.parse()?;
        if id.name != "cover" {
            return Err(CliError::Input(format!("{spec} is not a covering")));
        }
        let param = |k: &str| {
            id.params
                .get(k)
                .copied()
                .ok_or_else(|| CliError::Input(format!("{spec}: missing parameter {k}")))
        };
        Ok(gen_cyclic_cover(param("m")?, param("k")?)?)
    } else {
        Ok(parse_candidate_json(&read(Path::new(spec))?)?)
    }
}

/// A witness file may hold `{"assignment": ...}` or a whole `decide` verdict.
fn load_witness(path: &Path) -> Result<std::collections::BTreeMap<Vertex, Vertex>, CliError> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let inner = value.get("witness").cloned().unwrap_or(value);
    parse_assignment(&inner.to_string()).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn task_value(t: &ColorlessTask) -> Value {
    serde_json::to_value(TaskJson::from(t)).expect("task serializes")
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

pub fn execute(cmd: &Command, limits: Limits) -> Result<Value, CliError> {
    let opts = ClosureOptions {
        limits,
        ..ClosureOptions::default()
    };
    match cmd {
        Command::Validate(args) => {
            let v = load(args)?;
            Ok(json!({
                "valid": true,
                "mode": format!("{:?}", args.mode).to_lowercase(),
                "carrier_map": v.task.is_carrier_map(),
                "within_assumptions": v.within_assumptions,
                "warnings": v.warnings,
                "task": task_value(&v.task),
            }))
        }

        Command::Closure {
            task,
            steps,
            fixed_point,
            report,
        } => {
            let t = load(task)?.task;
            let mut engine = ClosureEngine::new(opts);
            let mut cur = t;
            let mut added = Vec::new();
            let mut applied = 0;
            let mut fixed = false;
            let budget = if *fixed_point { usize::MAX } else { steps.unwrap_or(1) };
            while applied < budget {
                let step = engine.step(&cur)?;
                applied += 1;
                fixed = step.is_fixed();
                added.push(to_value(&step.added));
                cur = step.after;
                if fixed {
                    break;
                }
            }
            let mut out = json!({
                "steps": applied,
                "fixed_point_reached": fixed,
                "task": task_value(&cur),
            });
            if *report == Some(Report::Added) {
                out["added"] = Value::Array(added);
            }
            Ok(out)
        }

        Command::Decide {
            task,
            n,
            confirm_minimal: confirm,
            verify_proof,
        } => {
            let t = load(task)?.task;
            if let Some(path) = verify_proof {
                let value: Value = serde_json::from_str(&read(path)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                let inner = value.get("proof").cloned().unwrap_or(value);
                let proof: RoundReductionProof =
                    serde_json::from_value(inner).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                return Ok(to_value(&verify_round_reduction_proof(&t, &proof, &opts)));
            }
            let verdict = decide(&t, *n, &opts)?;
            let mut out = to_value(&verdict);
            if *confirm {
                if let wfdecide::closure::Verdict::Solvable { rounds, .. } = &verdict {
                    out["minimal"] = to_value(&confirm_minimal(&t, *n, *rounds, &opts)?);
                }
            }
            Ok(out)
        }

        Command::Solve { task, n, rounds } => {
            let t = load(task)?.task;
            let res = t_round_solvable(&t, *n, *rounds, &limits)?;
            let mut out = json!({
                "n": n,
                "rounds": rounds,
                "stats": res.stats,
            });
            match res.result {
                SearchResult::Found(m) => {
                    out["result"] = json!("found");
                    out["witness"] = to_value(&m);
                }
                SearchResult::Exhausted => out["result"] = json!("exhausted"),
            }
            Ok(out)
        }

        Command::Flp {
            task,
            n,
            oracle,
            steps,
            witness,
            out,
            verify,
        } => {
            let t = load(task)?.task;
            if let Some(path) = verify {
                let tr: Transcript = serde_json::from_str(&read(path)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                return Ok(to_value(&verify_transcript(&t, *n, &tr, &opts)));
            }
            let steps = steps.expect("required by the parser");
            let mut boxed: Box<dyn ValencyOracle> = match oracle.expect("required by the parser") {
                OracleKind::Stubborn => Box::new(StubbornOracle),
                OracleKind::Honest => {
                    let path = witness.as_ref().expect("required by the parser");
                    let w = load_witness(path)?;
                    let depth = HonestOracle::infer_depth(&w)
                        .ok_or_else(|| CliError::Input(format!("{}: empty witness", path.display())))?;
                    Box::new(HonestOracle::new(&t, *n, w, depth, &limits)?)
                }
            };
            let outcome = flp_from_round_reduction(&t, *n, boxed.as_mut(), steps, &opts)?;
            let label = |mut tr: Transcript| {
                tr.task = Some(task.task.clone());
                tr
            };
            let (result, saved) = match outcome {
                FlpOutcome::Transcript(tr) => {
                    let tr = label(tr);
                    let check = verify_transcript(&t, *n, &tr, &opts);
                    (
                        json!({
                            "outcome": "transcript",
                            "steps": tr.steps.len(),
                            "verified": check.valid,
                            "transcript": to_value(&tr),
                        }),
                        Some(tr),
                    )
                }
                FlpOutcome::Concedes { reason, partial } => {
                    let partial = partial.map(label);
                    (
                        json!({
                            "outcome": "concedes",
                            "reason": reason,
                            "steps": partial.as_ref().map_or(0, |p| p.steps.len()),
                            "partial": partial.as_ref().map(to_value),
                        }),
                        partial,
                    )
                }
            };
            if let (Some(path), Some(tr)) = (out, saved) {
                fs::write(
                    path,
                    serde_json::to_string_pretty(&tr).expect("transcript serializes") + "\n",
                )?;
            }
            Ok(result)
        }

        Command::Covering { action } => match action {
            CoveringCommand::Check { candidate } => {
                let c = load_candidate(candidate)?;
                let report = validate_covering(&c)?;
                let mut out = to_value(&report);
                out["local_isomorphism_failures"] = to_value(&local_isomorphism_failures(&c));
                Ok(out)
            }
            CoveringCommand::Gen { m, k } => Ok(to_value(&gen_cyclic_cover(*m, *k)?)),
            CoveringCommand::Impossibility { candidate, n } => {
                let c = load_candidate(candidate)?;
                Ok(to_value(&covering_impossibility(&c, *n, &opts)?))
            }
        },

        Command::Export { task, dot } => {
            let t = load(task)?.task;
            fs::create_dir_all(dot)?;
            fs::write(dot.join("input.dot"), t.input().to_dot("input"))?;
            fs::write(dot.join("output.dot"), t.output().to_dot("output"))?;
            serde_json::from_str(&task_to_json(&t)).map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}
