use std::collections::BTreeMap;

use crate::complex::{decode_members, encode_set, Simplex, SimplicialMapping, Vertex};
use crate::solver::{check_round_witness, protocol_complex, Limits};
use crate::task::ColorlessTask;

use super::{closure_step, ClosureError, ClosureOptions, ClosureStepReport};

fn require_witness(
    t: &ColorlessTask,
    n: usize,
    rounds: usize,
    f: &BTreeMap<Vertex, Vertex>,
    limits: &Limits,
) -> Result<(), ClosureError> {
    if check_round_witness(t, n, rounds, f, limits)? {
        Ok(())
    } else {
        Err(ClosureError::WitnessInvalid(format!(
            "map does not solve the task in {rounds} rounds with {n} processes"
        )))
    }
}

fn mapping(
    t: &ColorlessTask,
    n: usize,
    rounds: usize,
    assignment: BTreeMap<Vertex, Vertex>,
    limits: &Limits,
) -> Result<SimplicialMapping, ClosureError> {
    let src = protocol_complex(t, n, rounds, limits)?;
    Ok(SimplicialMapping::new(
        src.complex().clone(),
        t.output().clone(),
        assignment,
    ))
}

/// From an `r`-round solution `f` of `t`, the `(r-1)`-round solution
/// `u ↦ f({u})` of the closure of `t`.
pub fn speedup_map(
    t: &ColorlessTask,
    f: &BTreeMap<Vertex, Vertex>,
    r: usize,
    n: usize,
    opts: &ClosureOptions,
) -> Result<SimplicialMapping, ClosureError> {
    if r == 0 {
        return Err(ClosureError::WitnessInvalid(
            "a speedup needs at least one round".into(),
        ));
    }
    require_witness(t, n, r, f, &opts.limits)?;
    let cl = closure_step(t, opts)?.after;
    let lower = protocol_complex(&cl, n, r - 1, &opts.limits)?;
    let assignment: BTreeMap<Vertex, Vertex> = lower
        .complex()
        .vertices()
        .iter()
        .map(|u| {
            let x = f
                .get(&encode_set([u]))
                .ok_or_else(|| ClosureError::WitnessInvalid(format!("no value for the solo view of {u}")))?;
            Ok((u.clone(), x.clone()))
        })
        .collect::<Result<_, ClosureError>>()?;
    if !check_round_witness(&cl, n, r - 1, &assignment, &opts.limits)? {
        return Err(ClosureError::Internal("speedup map does not solve the closure".into()));
    }
    mapping(&cl, n, r - 1, assignment, &opts.limits)
}

/// From an `(r-1)`-round solution `g` of `step.after`, an `r`-round solution
/// of `step.before`, for inputs of dimension at most 1.
///
/// A solo view `{w}` decides `g(w)`. A view `{w, w'}` over input edge `e`
/// with `y = g(w) ≠ g(w') = y'` runs the one-round local witness for
/// `{y, y'}` over `e`, or decides `min(y, y')` when `{y, y'}` was already in
/// `Δ(e)`.
pub fn lift_map_1dim(
    step: &ClosureStepReport,
    g: &BTreeMap<Vertex, Vertex>,
    r: usize,
    n: usize,
    limits: &Limits,
) -> Result<SimplicialMapping, ClosureError> {
    let t = &step.before;
    if let Some(d) = t.input().dim().filter(|d| *d > 1) {
        return Err(ClosureError::DimensionUnsupported { dim: d });
    }
    if r == 0 {
        return Err(ClosureError::WitnessInvalid(
            "lifting produces at least one round".into(),
        ));
    }
    require_witness(&step.after, n, r - 1, g, limits)?;
    let prev = protocol_complex(t, n, r - 1, limits)?;
    let next = protocol_complex(t, n, r, limits)?;

    let value = |w: &Vertex| -> Result<Vertex, ClosureError> {
        g.get(w)
            .cloned()
            .ok_or_else(|| ClosureError::WitnessInvalid(format!("no value for {w}")))
    };
    let mut assignment = BTreeMap::new();
    for x in next.complex().vertices() {
        let members = decode_members(x).ok_or_else(|| ClosureError::Internal(format!("malformed view {x}")))?;
        let out = match members.as_slice() {
            [w] => value(w)?,
            [w, w2] => {
                let (y, y2) = (value(w)?, value(w2)?);
                if y == y2 {
                    y
                } else {
                    let e = prev.carrier_of(&Simplex::from_nonempty([w.clone(), w2.clone()]));
                    let e2 = Simplex::from_nonempty([y.clone(), y2.clone()]);
                    if t.image(&e).contains(&e2) {
                        y.min(y2)
                    } else {
                        let local = step.added_for(&e).find(|a| a.tau == e2).ok_or_else(|| {
                            ClosureError::MissingLocalWitness {
                                sigma: e.clone(),
                                tau: e2.clone(),
                            }
                        })?;
                        local.witness.assignment[&encode_set([&y, &y2])].clone()
                    }
                }
            }
            _ => return Err(ClosureError::DimensionUnsupported { dim: members.len() - 1 }),
        };
        assignment.insert(x.clone(), out);
    }
    if !check_round_witness(t, n, r, &assignment, limits)? {
        return Err(ClosureError::Internal("lifted map does not solve the task".into()));
    }
    mapping(t, n, r, assignment, limits)
}
