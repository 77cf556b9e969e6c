//! Existence of simplicial maps under domain and image constraints.

mod search;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    bary, bary_t, decode_members, image_under, Complex, ComplexError, Simplex, SimplicialMapping, SubdividedComplex,
    Vertex, DEFAULT_MAX_VERTICES,
};
use crate::task::{local_task, ColorlessTask, TaskError};

use search::{Constraint, Csp, Outcome, MAX_TARGET};

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

/// Resource caps shared by every search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: u64,
    pub max_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: DEFAULT_MAX_NODES,
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub backtracks: u64,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, o: SearchStats) {
        self.nodes += o.nodes;
        self.backtracks += o.backtracks;
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("search budget exhausted after {} nodes", stats.nodes)]
    ResourceLimit { stats: SearchStats },
    #[error("target has {vertices} vertices; at most 128 are supported")]
    TargetTooLarge { vertices: usize },
    #[error("invalid search problem: {0}")]
    InvalidProblem(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Task(#[from] TaskError),
}

impl SolverError {
    /// Budget or size caps, as opposed to malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            SolverError::ResourceLimit { .. } | SolverError::Complex(ComplexError::ResourceLimit { .. })
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Found(SimplicialMapping),
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self.result, SearchResult::Found(_))
    }

    pub fn witness(&self) -> Option<&SimplicialMapping> {
        match &self.result {
            SearchResult::Found(m) => Some(m),
            SearchResult::Exhausted => None,
        }
    }
}

/// Find `f: V(source) → V(target)` such that
/// - `f(v) ∈ domains[v]` where a domain is given,
/// - `f(v) = pinned[v]` where a pin is given,
/// - every source facet is sent to a simplex of `target`,
/// - every constrained source simplex is sent to a simplex of its complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSearchProblem {
    pub source: Complex,
    pub target: Complex,
    pub domains: BTreeMap<Vertex, BTreeSet<Vertex>>,
    pub constraints: BTreeMap<Simplex, Complex>,
    pub pinned: BTreeMap<Vertex, Vertex>,
}

impl MapSearchProblem {
    pub fn new(source: Complex, target: Complex) -> Self {
        MapSearchProblem {
            source,
            target,
            domains: BTreeMap::new(),
            constraints: BTreeMap::new(),
            pinned: BTreeMap::new(),
        }
    }
}

fn mask_of(ids: &BTreeMap<&Vertex, u8>, s: &Simplex) -> Option<u128> {
    s.iter().try_fold(0u128, |m, v| ids.get(v).map(|&i| m | 1u128 << i))
}

pub fn find_map(p: &MapSearchProblem, limits: &Limits) -> Result<SearchOutcome, SolverError> {
    let tv = p.target.vertices();
    if tv.len() > MAX_TARGET {
        return Err(SolverError::TargetTooLarge { vertices: tv.len() });
    }
    let tid: BTreeMap<&Vertex, u8> = tv.iter().enumerate().map(|(i, v)| (v, i as u8)).collect();
    let sv = p.source.vertices();
    let sid: BTreeMap<&Vertex, u32> = sv.iter().enumerate().map(|(i, v)| (v, i as u32)).collect();

    for v in p.domains.keys().chain(p.pinned.keys()) {
        if !sid.contains_key(v) {
            return Err(SolverError::InvalidProblem(format!("{v} is not a source vertex")));
        }
    }
    let full: u128 = if tv.len() == MAX_TARGET {
        u128::MAX
    } else {
        (1u128 << tv.len()) - 1
    };
    let mut domains = vec![full; sv.len()];
    for (v, d) in &p.domains {
        domains[sid[v] as usize] = d.iter().filter_map(|x| tid.get(x)).fold(0, |m, &i| m | 1u128 << i);
    }
    let mut pinned = vec![None; sv.len()];
    for (v, x) in &p.pinned {
        let Some(&x) = tid.get(x) else {
            return Err(SolverError::InvalidProblem(format!(
                "pin {v} -> {x} is outside the target"
            )));
        };
        pinned[sid[v] as usize] = Some(x);
    }

    let facet_masks = |k: &Complex| -> Result<Vec<u128>, SolverError> {
        k.facets()
            .iter()
            .map(|f| mask_of(&tid, f).ok_or_else(|| SolverError::InvalidProblem(format!("{f} is not in the target"))))
            .collect()
    };
    let target_facets = facet_masks(&p.target)?;
    let mut constraints = Vec::new();
    let mut push = |s: &Simplex, facets: Vec<u128>| -> Result<(), SolverError> {
        let vars = s
            .iter()
            .map(|v| sid.get(v).copied())
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| SolverError::InvalidProblem(format!("{s} is not a source simplex")))?;
        constraints.push(Constraint { vars, facets });
        Ok(())
    };
    for f in p.source.facets() {
        push(f, target_facets.clone())?;
    }
    for (s, k) in &p.constraints {
        push(s, facet_masks(k)?)?;
    }

    let csp = Csp {
        domains,
        pinned,
        constraints,
    };
    let mut stats = SearchStats::default();
    match search::solve(&csp, limits.max_nodes, &mut stats) {
        Outcome::Found(values) => {
            let assignment = sv
                .iter()
                .zip(values)
                .map(|(v, x)| (v.clone(), tv[x as usize].clone()))
                .collect();
            Ok(SearchOutcome {
                result: SearchResult::Found(SimplicialMapping::new(p.source.clone(), p.target.clone(), assignment)),
                stats,
            })
        }
        Outcome::Exhausted => Ok(SearchOutcome {
            result: SearchResult::Exhausted,
            stats,
        }),
        Outcome::Budget => Err(SolverError::ResourceLimit { stats }),
    }
}

/// Checks a mapping against a problem without using the search internals.
pub fn check_solution(p: &MapSearchProblem, m: &SimplicialMapping) -> bool {
    if m.source != p.source || m.target != p.target {
        return false;
    }
    let total = p.source.vertices().iter().all(|v| m.assignment.contains_key(v));
    total
        && m.check_simplicial() == Ok(true)
        && p.domains.iter().all(|(v, d)| d.contains(&m.assignment[v]))
        && p.pinned.iter().all(|(v, x)| &m.assignment[v] == x)
        && p.constraints
            .iter()
            .all(|(s, k)| m.image_of(s).is_ok_and(|img| k.contains(&img)))
}

/// The subdivided protocol complex for `n` processes and `rounds` rounds.
pub fn protocol_complex(
    t: &ColorlessTask,
    n: usize,
    rounds: usize,
    limits: &Limits,
) -> Result<SubdividedComplex, SolverError> {
    if n == 0 {
        return Err(SolverError::InvalidProblem("at least one process is needed".into()));
    }
    Ok(bary_t(&t.input().skeleton(n - 1), rounds, limits.max_vertices)?)
}

/// The search problem whose solutions are `rounds`-round decision maps.
pub fn round_problem(
    t: &ColorlessTask,
    n: usize,
    rounds: usize,
    limits: &Limits,
) -> Result<MapSearchProblem, SolverError> {
    let sub = protocol_complex(t, n, rounds, limits)?;
    let max_dim = n - 1;
    let mut images: BTreeMap<Simplex, Complex> = BTreeMap::new();
    let mut image = |c: &Simplex| -> Complex {
        images
            .entry(c.clone())
            .or_insert_with(|| t.effective_image(c, max_dim))
            .clone()
    };

    let mut p = MapSearchProblem::new(sub.complex().clone(), t.output().clone());
    for (v, c) in sub.carriers() {
        p.domains
            .insert(v.clone(), image(c).vertices().iter().cloned().collect());
    }
    // A face needs its own constraint only when no facet above it has the same carrier.
    let facet_carriers: Vec<(Simplex, Simplex)> = sub
        .complex()
        .facets()
        .iter()
        .map(|f| (f.clone(), sub.carrier_of(f)))
        .collect();
    for s in sub.complex().simplices() {
        if s.len() == 1 {
            continue;
        }
        let c = sub.carrier_of(&s);
        let covered = facet_carriers
            .iter()
            .any(|(f, fc)| fc == &c && s.is_subset_of(f) && f.len() > s.len());
        if !covered {
            p.constraints.insert(s, image(&c));
        }
    }
    Ok(p)
}

/// Is `t` solvable by `n` processes in `rounds` rounds?
pub fn t_round_solvable(
    t: &ColorlessTask,
    n: usize,
    rounds: usize,
    limits: &Limits,
) -> Result<SearchOutcome, SolverError> {
    find_map(&round_problem(t, n, rounds, limits)?, limits)
}

/// A decision map `δ: V(I) → V(O)` with `δ(σ) ∈ Δ(σ)` on simplices of dimension below `n`.
pub fn zero_round_solvable(t: &ColorlessTask, n: usize, limits: &Limits) -> Result<SearchOutcome, SolverError> {
    t_round_solvable(t, n, 0, limits)
}

/// Sends each vertex of `Bary(τ)` to the smallest base vertex it contains.
fn min_member_witness(tau: &Simplex, target: &Complex) -> SimplicialMapping {
    let b = bary(&Complex::simplex(tau));
    let assignment = b
        .complex()
        .vertices()
        .iter()
        .map(|v| {
            let members = decode_members(v).expect("subdivision labels are sets");
            (v.clone(), members.into_iter().min().unwrap())
        })
        .collect();
    SimplicialMapping::new(b.complex().clone(), target.clone(), assignment)
}

fn check_local_args(t: &ColorlessTask, sigma: &Simplex, tau: &Simplex) -> Result<(), SolverError> {
    if tau.len() > sigma.len() {
        return Err(SolverError::InvalidProblem(format!(
            "{tau} has more vertices than {sigma}"
        )));
    }
    local_task(t, sigma, tau)?;
    Ok(())
}

/// The search problem for a one-round solution of the local task of `σ` and `τ`.
pub fn local_problem(t: &ColorlessTask, sigma: &Simplex, tau: &Simplex) -> Result<MapSearchProblem, SolverError> {
    check_local_args(t, sigma, tau)?;
    let target = t.image(sigma).clone();
    let b = bary(&Complex::simplex(tau));
    let mut p = MapSearchProblem::new(b.complex().clone(), target);
    for v in tau {
        p.pinned.insert(crate::complex::encode_set([v]), v.clone());
    }
    Ok(p)
}

/// Is the local task of `σ` and `τ` solvable in one round by `|τ|` processes?
///
/// When `τ` is already a simplex of `Δ(σ)` the answer is immediate.
pub fn one_round_local_solvable(
    t: &ColorlessTask,
    sigma: &Simplex,
    tau: &Simplex,
    limits: &Limits,
) -> Result<SearchOutcome, SolverError> {
    check_local_args(t, sigma, tau)?;
    let img = t.image(sigma);
    if img.contains(tau) {
        return Ok(SearchOutcome {
            result: SearchResult::Found(min_member_witness(tau, img)),
            stats: SearchStats::default(),
        });
    }
    find_map(&local_problem(t, sigma, tau)?, limits)
}

/// Does `assignment` solve `t` for `n` processes in `rounds` rounds?
///
/// Every simplex of the protocol complex is checked against `Δ(σ)` for every
/// input simplex `σ` containing its carrier.
pub fn check_round_witness(
    t: &ColorlessTask,
    n: usize,
    rounds: usize,
    assignment: &BTreeMap<Vertex, Vertex>,
    limits: &Limits,
) -> Result<bool, SolverError> {
    let sub = protocol_complex(t, n, rounds, limits)?;
    let inputs: Vec<(&Simplex, &Complex)> = t.delta().iter().filter(|(s, _)| s.dim() < n).collect();
    for rho in sub.complex().simplices() {
        let Ok(img) = image_under(assignment, &rho) else {
            return Ok(false);
        };
        let c = sub.carrier_of(&rho);
        for (sigma, out) in &inputs {
            if c.is_subset_of(sigma) && !out.contains(&img) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Does `assignment` solve the local task of `σ` and `τ` in one round?
pub fn check_local_witness(
    t: &ColorlessTask,
    sigma: &Simplex,
    tau: &Simplex,
    assignment: &BTreeMap<Vertex, Vertex>,
) -> Result<bool, SolverError> {
    check_local_args(t, sigma, tau)?;
    let lt = local_task(t, sigma, tau)?;
    check_round_witness(&lt, tau.len(), 1, assignment, &Limits::default())
}
