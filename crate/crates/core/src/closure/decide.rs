use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialMapping, Vertex};
use crate::solver::{check_local_witness, t_round_solvable, zero_round_solvable, SearchResult};
use crate::task::ColorlessTask;

use super::{lift_map_1dim, AddedSimplex, ClosureEngine, ClosureError, ClosureOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub added: Vec<AddedSimplex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum RefutationResult {
    Exhausted,
    Found { witness: BTreeMap<Vertex, Vertex> },
}

/// Record of the search showing the fixed point has no zero-round solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub searched: u64,
    pub backtracks: u64,
    #[serde(flatten)]
    pub result: RefutationResult,
}

/// Closure chain to a fixed point that is not solvable in zero rounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundReductionProof {
    pub n: usize,
    pub chain: Vec<ProofStep>,
    pub fixed_point: ColorlessTask,
    pub refutation: Refutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Solvable {
        rounds: usize,
        witness: SimplicialMapping,
    },
    Unsolvable {
        proof: RoundReductionProof,
    },
    Inconclusive {
        fixed_point: ColorlessTask,
        note: String,
        zero_round_witness: SimplicialMapping,
    },
}

/// Decides solvability of `t` by `n` processes through its closure fixed point.
///
/// A fixed point with no zero-round solution proves `t` unsolvable. One with
/// a zero-round solution yields a solution of `t` in as many rounds as the
/// closure took to stabilize, when the input has dimension at most 1.
pub fn decide(t: &ColorlessTask, n: usize, opts: &ClosureOptions) -> Result<Verdict, ClosureError> {
    let fp = ClosureEngine::new(*opts).fixed_point(t)?;
    let zero = zero_round_solvable(&fp.task, n, &opts.limits)?;
    let witness = match zero.result {
        SearchResult::Exhausted => {
            return Ok(Verdict::Unsolvable {
                proof: RoundReductionProof {
                    n,
                    chain: fp.chain.iter().map(|s| ProofStep { added: s.added.clone() }).collect(),
                    fixed_point: fp.task,
                    refutation: Refutation {
                        searched: zero.stats.nodes,
                        backtracks: zero.stats.backtracks,
                        result: RefutationResult::Exhausted,
                    },
                },
            })
        }
        SearchResult::Found(w) => w,
    };
    match t.input().dim() {
        Some(d) if d > 1 => Ok(Verdict::Inconclusive {
            fixed_point: fp.task,
            note: format!(
                "the fixed point is solvable in zero rounds, but lifting solutions back is only \
                 available for inputs of dimension at most 1 (input has dimension {d})"
            ),
            zero_round_witness: witness,
        }),
        _ => {
            let m = fp.iterations;
            let mut g = witness;
            for (i, step) in fp.chain[..m].iter().enumerate().rev() {
                g = lift_map_1dim(step, &g.assignment, m - i, n, &opts.limits)?;
            }
            Ok(Verdict::Solvable { rounds: m, witness: g })
        }
    }
}

/// Whether `rounds - 1` rounds are provably not enough; `None` when `rounds` is 0.
pub fn confirm_minimal(
    t: &ColorlessTask,
    n: usize,
    rounds: usize,
    opts: &ClosureOptions,
) -> Result<Option<bool>, ClosureError> {
    if rounds == 0 {
        return Ok(None);
    }
    let out = t_round_solvable(t, n, rounds - 1, &opts.limits)?;
    Ok(Some(!out.is_found()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofCheck {
    pub valid: bool,
    pub diagnosis: Option<String>,
}

impl ProofCheck {
    fn ok() -> Self {
        ProofCheck {
            valid: true,
            diagnosis: None,
        }
    }

    fn fail(d: impl Into<String>) -> Self {
        ProofCheck {
            valid: false,
            diagnosis: Some(d.into()),
        }
    }
}

/// Recomputes every closure step, the fixed point and the zero-round search.
pub fn verify_round_reduction_proof(t: &ColorlessTask, p: &RoundReductionProof, opts: &ClosureOptions) -> ProofCheck {
    if p.refutation.result != RefutationResult::Exhausted {
        return ProofCheck::fail("refutation is not an exhaustive search");
    }
    if p.chain.last().is_none_or(|s| !s.added.is_empty()) {
        return ProofCheck::fail("chain does not end at a fixed point");
    }
    let fp = match ClosureEngine::new(*opts).fixed_point(t) {
        Ok(fp) => fp,
        Err(e) => return ProofCheck::fail(format!("closure failed: {e}")),
    };
    if fp.chain.len() != p.chain.len() {
        return ProofCheck::fail(format!(
            "step mismatch: chain has {} steps, recomputed {}",
            p.chain.len(),
            fp.chain.len()
        ));
    }
    let keys = |a: &[AddedSimplex]| -> BTreeSet<(Simplex, Simplex)> {
        a.iter().map(|x| (x.sigma.clone(), x.tau.clone())).collect()
    };
    for (i, (claimed, actual)) in p.chain.iter().zip(&fp.chain).enumerate() {
        if keys(&claimed.added) != keys(&actual.added) || claimed.added.len() != actual.added.len() {
            return ProofCheck::fail(format!("step mismatch at step {}", i + 1));
        }
        for a in &claimed.added {
            match check_local_witness(&actual.before, &a.sigma, &a.tau, &a.witness.assignment) {
                Ok(true) => {}
                _ => {
                    return ProofCheck::fail(format!(
                        "invalid local witness for {} over {} at step {}",
                        a.tau,
                        a.sigma,
                        i + 1
                    ))
                }
            }
        }
    }
    if p.fixed_point != fp.task {
        return ProofCheck::fail("fixed point mismatch");
    }
    match zero_round_solvable(&fp.task, p.n, &opts.limits) {
        Ok(out) if !out.is_found() => ProofCheck::ok(),
        Ok(_) => ProofCheck::fail("fixed point is solvable in zero rounds"),
        Err(e) => ProofCheck::fail(format!("refutation could not be rerun: {e}")),
    }
}
