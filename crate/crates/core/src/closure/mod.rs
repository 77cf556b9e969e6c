//! The colorless closure operator and its fixed point.
//!
//! One closure step adds to `Δ(σ)` every vertex set `τ ⊆ V(Δ(σ))` with at
//! most `dim σ + 1` vertices whose local task is solvable in one round.
//! Iterating reaches a fixed point `Π*` that is either solvable in zero
//! rounds or not solvable at all.

mod decide;
mod witness;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Complex, Simplex, Vertex, Witness};
use crate::solver::{one_round_local_solvable, Limits, SearchResult, SolverError};
use crate::task::{ColorlessTask, TaskError};

pub use decide::{
    confirm_minimal, decide, verify_round_reduction_proof, ProofCheck, ProofStep, Refutation, RefutationResult,
    RoundReductionProof, Verdict,
};
pub use witness::{lift_map_1dim, speedup_map};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error("witness does not solve the task: {0}")]
    WitnessInvalid(String),
    #[error("no stored one-round witness for {tau} over {sigma}")]
    MissingLocalWitness { sigma: Simplex, tau: Simplex },
    #[error("lifting needs an input complex of dimension at most 1, got {dim}")]
    DimensionUnsupported { dim: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

impl ClosureError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, ClosureError::Solver(e) if e.is_resource_limit())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureOptions {
    pub limits: Limits,
    /// Skip candidates spanning several components of `Δ(σ)` (carrier maps only).
    pub fast_path: bool,
    /// Also search the skipped candidates and fail if any of them is solvable.
    pub verify_fast_path: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            limits: Limits::default(),
            fast_path: true,
            verify_fast_path: false,
        }
    }
}

/// A simplex `τ` added to `Δ(σ)`, with its one-round local witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedSimplex {
    pub sigma: Simplex,
    pub tau: Simplex,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureStepReport {
    pub before: ColorlessTask,
    pub after: ColorlessTask,
    /// Sorted by `(σ, τ)`.
    pub added: Vec<AddedSimplex>,
}

impl ClosureStepReport {
    pub fn is_fixed(&self) -> bool {
        self.added.is_empty()
    }

    pub fn added_for<'a>(&'a self, sigma: &'a Simplex) -> impl Iterator<Item = &'a AddedSimplex> + 'a {
        self.added.iter().filter(move |a| &a.sigma == sigma)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub task: ColorlessTask,
    /// Number of steps that added something.
    pub iterations: usize,
    /// `iterations + 1` steps; the last one adds nothing.
    pub chain: Vec<ClosureStepReport>,
}

/// Output complex spanned by the images, keeping every original output vertex.
fn output_of(delta: &BTreeMap<Simplex, Complex>, old: &Complex) -> Complex {
    Complex::from_facets(
        delta
            .values()
            .flat_map(|c| c.facets().iter().cloned())
            .chain(old.vertices().iter().map(|v| Simplex::vertex(v.clone()))),
    )
}

fn spans_one_component(components: &BTreeMap<Vertex, usize>, tau: &Simplex) -> bool {
    tau.iter().map(|v| components[v]).collect::<BTreeSet<_>>().len() == 1
}

type LocalVerdict = Option<BTreeMap<Vertex, Vertex>>;

/// Runs closure steps, remembering local-task verdicts across steps.
#[derive(Default)]
pub struct ClosureEngine {
    pub options: ClosureOptions,
    memo: HashMap<(Complex, Simplex), LocalVerdict>,
}

impl ClosureEngine {
    pub fn new(options: ClosureOptions) -> Self {
        ClosureEngine {
            options,
            memo: HashMap::new(),
        }
    }

    fn solve_candidates(&mut self, t: &ColorlessTask, todo: &[(Simplex, Simplex)]) -> Result<(), ClosureError> {
        let fresh: Vec<&(Simplex, Simplex)> = {
            let mut seen = BTreeSet::new();
            todo.iter()
                .filter(|(s, tau)| {
                    let key = (t.image(s).clone(), tau.clone());
                    !self.memo.contains_key(&key) && seen.insert(key)
                })
                .collect()
        };
        let limits = self.options.limits;
        let results: Vec<Result<LocalVerdict, SolverError>> = fresh
            .par_iter()
            .map(|(sigma, tau)| {
                one_round_local_solvable(t, sigma, tau, &limits).map(|o| match o.result {
                    SearchResult::Found(m) => Some(m.assignment),
                    SearchResult::Exhausted => None,
                })
            })
            .collect();
        for ((sigma, tau), r) in fresh.into_iter().zip(results) {
            self.memo.insert((t.image(sigma).clone(), tau.clone()), r?);
        }
        Ok(())
    }

    fn verdict(&self, t: &ColorlessTask, sigma: &Simplex, tau: &Simplex) -> &LocalVerdict {
        &self.memo[&(t.image(sigma).clone(), tau.clone())]
    }

    /// One application of the closure operator.
    pub fn step(&mut self, t: &ColorlessTask) -> Result<ClosureStepReport, ClosureError> {
        let carrier = t.is_carrier_map();
        let fast = self.options.fast_path && carrier;
        let mut searched = Vec::new();
        let mut skipped = Vec::new();
        for (sigma, img) in t.delta() {
            let components = img.component_index();
            let verts = img.vertices();
            for size in 2..=sigma.len().min(verts.len()) {
                for tau in Simplex::from_nonempty(verts.iter().cloned()).faces_of_size(size) {
                    if img.contains(&tau) {
                        continue;
                    }
                    if fast && !spans_one_component(&components, &tau) {
                        skipped.push((sigma.clone(), tau));
                    } else {
                        searched.push((sigma.clone(), tau));
                    }
                }
            }
        }
        self.solve_candidates(t, &searched)?;
        if self.options.verify_fast_path {
            self.solve_candidates(t, &skipped)?;
            if let Some((s, tau)) = skipped.iter().find(|(s, tau)| self.verdict(t, s, tau).is_some()) {
                return Err(ClosureError::Internal(format!(
                    "{tau} spans several components of the image of {s} but is solvable"
                )));
            }
        }

        let mut added = Vec::new();
        for (sigma, tau) in &searched {
            if let Some(w) = self.verdict(t, sigma, tau) {
                added.push(AddedSimplex {
                    sigma: sigma.clone(),
                    tau: tau.clone(),
                    witness: Witness { assignment: w.clone() },
                });
            }
        }
        added.sort_by(|a, b| (&a.sigma, &a.tau).cmp(&(&b.sigma, &b.tau)));

        let mut delta = t.delta().clone();
        for a in &added {
            let img = delta.get_mut(&a.sigma).unwrap();
            *img = img.union(&Complex::simplex(&a.tau));
        }
        let output = output_of(&delta, t.output());
        let after = ColorlessTask::new(t.input().clone(), output, delta)?;
        if carrier && !after.is_carrier_map() {
            return Err(ClosureError::Internal(
                "closure of a carrier map is not a carrier map".into(),
            ));
        }
        Ok(ClosureStepReport {
            before: t.clone(),
            after,
            added,
        })
    }

    /// Iterates closure steps until one adds nothing.
    pub fn fixed_point(&mut self, t: &ColorlessTask) -> Result<FixedPoint, ClosureError> {
        let mut chain = Vec::new();
        let mut cur = t.clone();
        loop {
            let report = self.step(&cur)?;
            let done = report.is_fixed();
            cur = report.after.clone();
            chain.push(report);
            if done {
                return Ok(FixedPoint {
                    task: cur,
                    iterations: chain.len() - 1,
                    chain,
                });
            }
        }
    }
}

pub fn closure_step(t: &ColorlessTask, opts: &ClosureOptions) -> Result<ClosureStepReport, ClosureError> {
    ClosureEngine::new(*opts).step(t)
}

pub fn fixed_point(t: &ColorlessTask, opts: &ClosureOptions) -> Result<FixedPoint, ClosureError> {
    ClosureEngine::new(*opts).fixed_point(t)
}

/// The fixed point built directly: each connected component of `Δ(σ)`
/// becomes complete up to dimension `dim σ`. Valid for carrier maps.
pub fn fixed_point_direct(t: &ColorlessTask) -> ColorlessTask {
    let delta: BTreeMap<Simplex, Complex> = t
        .delta()
        .iter()
        .map(|(sigma, img)| {
            let full = img
                .connected_components()
                .into_iter()
                .map(|c| Complex::full(c).expect("components are nonempty").skeleton(sigma.dim()))
                .fold(Complex::empty(), |a, c| a.union(&c));
            (sigma.clone(), full)
        })
        .collect();
    let output = output_of(&delta, t.output());
    ColorlessTask::new(t.input().clone(), output, delta).expect("same input simplices")
}
