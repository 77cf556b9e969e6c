//! Covering complexes and the tasks they define.
//!
//! A covering `(O, f)` of a connected complex `I` gives the task with
//! `Δ(σ) = {τ ∈ O : f(τ) ⊆ σ}`. Nontrivial coverings are never solvable.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::{decide, ClosureError, ClosureOptions, Verdict};
use crate::complex::{Complex, Simplex, Vertex};
use crate::task::{ColorlessTask, TaskError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoveringError {
    #[error("projection is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("not connected: {0}")]
    NotConnected(String),
    #[error("not a covering: {0}")]
    NotACovering(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringCandidate {
    pub base: Complex,
    pub cover: Complex,
    pub projection: BTreeMap<Vertex, Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub is_covering: bool,
    /// Maximal simplices over each simplex of the base.
    #[serde(serialize_with = "sheets_as_list")]
    pub sheets: BTreeMap<Simplex, Vec<Simplex>>,
    pub sheet_count: Option<usize>,
    pub is_trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

fn sheets_as_list<S: serde::Serializer>(m: &BTreeMap<Simplex, Vec<Simplex>>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        simplex: &'a Simplex,
        sheets: &'a [Simplex],
    }
    s.collect_seq(m.iter().map(|(simplex, sheets)| Entry { simplex, sheets }))
}

pub fn parse_candidate_json(text: &str) -> Result<CoveringCandidate, CoveringError> {
    serde_json::from_str(text).map_err(|e| CoveringError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

impl CoveringCandidate {
    fn project(&self, s: &Simplex) -> Option<Simplex> {
        let img: Option<Vec<Vertex>> = s.iter().map(|v| self.projection.get(v).cloned()).collect();
        Simplex::new(img?).ok()
    }

    fn preimage(&self, sigma: &Simplex) -> Complex {
        let vs: Vec<&Vertex> = self
            .projection
            .iter()
            .filter(|(_, b)| sigma.contains_vertex(b))
            .map(|(a, _)| a)
            .collect();
        self.cover.induced(vs)
    }
}

/// Checks that `f` is simplicial, both complexes are connected and every
/// preimage `f⁻¹(σ)` splits into disjoint copies of `σ`.
pub fn validate_covering(c: &CoveringCandidate) -> Result<CoveringReport, CoveringError> {
    for v in c.cover.vertices() {
        match c.projection.get(v) {
            None => return Err(CoveringError::NotSimplicial(format!("no image for {v}"))),
            Some(b) if !c.base.contains_vertex(b) => {
                return Err(CoveringError::NotSimplicial(format!(
                    "{v} maps to {b}, which is not in the base"
                )))
            }
            _ => {}
        }
    }
    if let Some(v) = c.projection.keys().find(|v| !c.cover.contains_vertex(v)) {
        return Err(CoveringError::NotSimplicial(format!(
            "{v} is not a vertex of the cover"
        )));
    }
    for tau in c.cover.facets() {
        let img = c.project(tau).expect("projection is total");
        if !c.base.contains(&img) {
            return Err(CoveringError::NotSimplicial(format!(
                "{tau} maps to {img}, which is not in the base"
            )));
        }
    }
    for (name, k) in [("base", &c.base), ("cover", &c.cover)] {
        let parts = k.connected_components().len();
        if parts != 1 {
            return Err(CoveringError::NotConnected(format!("{name} has {parts} components")));
        }
    }

    let mut sheets = BTreeMap::new();
    let mut failure = None;
    let mut counts = BTreeSet::new();
    for sigma in c.base.simplices() {
        let over = c.preimage(&sigma).facets().to_vec();
        if failure.is_none() {
            let mut seen = BTreeSet::new();
            for tau in &over {
                if c.project(tau).as_ref() != Some(&sigma) || tau.len() != sigma.len() {
                    failure = Some(format!("{tau} does not map one-to-one onto {sigma}"));
                    break;
                }
                if let Some(v) = tau.iter().find(|v| !seen.insert((*v).clone())) {
                    failure = Some(format!("sheets over {sigma} share {v}"));
                    break;
                }
            }
        }
        counts.insert(over.len());
        sheets.insert(sigma, over);
    }
    if failure.is_none() && counts.len() > 1 {
        failure = Some(format!("sheet counts differ across the base: {counts:?}"));
    }
    let sheet_count = if failure.is_none() {
        counts.first().copied()
    } else {
        None
    };
    Ok(CoveringReport {
        is_covering: failure.is_none(),
        sheets,
        sheet_count,
        is_trivial: sheet_count == Some(1),
        failure,
    })
}

/// The task `(I, O, Δ)` with `Δ(σ) = {τ ∈ O : f(τ) ⊆ σ}`.
pub fn covering_task(c: &CoveringCandidate) -> Result<ColorlessTask, CoveringError> {
    let report = validate_covering(c)?;
    if let Some(f) = report.failure {
        return Err(CoveringError::NotACovering(f));
    }
    let delta = c.base.simplices().into_iter().map(|s| {
        let img = c.preimage(&s);
        (s, img)
    });
    Ok(ColorlessTask::new(c.base.clone(), c.cover.clone(), delta.collect())?)
}

/// The `k`-sheeted cover of the `m`-cycle by the `km`-cycle, `v_j ↦ u_{j mod m}`.
pub fn gen_cyclic_cover(m: usize, k: usize) -> Result<CoveringCandidate, CoveringError> {
    if m < 3 || k < 1 {
        return Err(CoveringError::InvalidParameter(format!(
            "a cyclic cover needs m >= 3 and k >= 1, got m={m}, k={k}"
        )));
    }
    let u = |i: usize| format!("u{}", i % m);
    let v = |j: usize| format!("v{}", j % (k * m));
    let base = Complex::build((0..m).map(|i| [u(i), u(i + 1)])).expect("nonempty edges");
    let cover = Complex::build((0..k * m).map(|j| [v(j), v(j + 1)])).expect("nonempty edges");
    let projection = (0..k * m).map(|j| (Vertex::new(v(j)), Vertex::new(u(j)))).collect();
    Ok(CoveringCandidate {
        base,
        cover,
        projection,
    })
}

/// Decides the covering task of `c` for `n` processes.
pub fn covering_impossibility(
    c: &CoveringCandidate,
    n: usize,
    opts: &ClosureOptions,
) -> Result<Verdict, CoveringError> {
    let t = covering_task(c)?;
    Ok(decide(&t, n, opts)?)
}

/// Cover vertices whose star is not isomorphic to the star of their image.
pub fn local_isomorphism_failures(c: &CoveringCandidate) -> Vec<Vertex> {
    c.cover
        .vertices()
        .iter()
        .filter(|v| {
            let image = c.base.star(&c.projection[*v]);
            !is_isomorphic(&c.cover.star(v), &image)
        })
        .cloned()
        .collect()
}

fn signature(k: &Complex) -> BTreeMap<Vertex, Vec<usize>> {
    let mut sig: BTreeMap<Vertex, Vec<usize>> = k.vertices().iter().map(|v| (v.clone(), Vec::new())).collect();
    for s in k.simplices() {
        for v in s.iter() {
            let e = sig.get_mut(v).unwrap();
            if e.len() < s.len() {
                e.resize(s.len(), 0);
            }
            e[s.len() - 1] += 1;
        }
    }
    sig
}

/// Exact isomorphism test by backtracking over vertex bijections that
/// preserve per-dimension degrees and adjacency.
pub fn is_isomorphic(a: &Complex, b: &Complex) -> bool {
    let (sa, sb) = (signature(a), signature(b));
    let profile = |s: &BTreeMap<Vertex, Vec<usize>>| {
        let mut p: Vec<&Vec<usize>> = s.values().collect();
        p.sort();
        p.into_iter().cloned().collect::<Vec<_>>()
    };
    if profile(&sa) != profile(&sb) || a.facets().len() != b.facets().len() {
        return false;
    }
    let mut search = IsoSearch {
        a,
        b,
        order: a.vertices().iter().collect(),
        target: b.vertices().iter().collect(),
        adj_a: a.adjacency(),
        adj_b: b.adjacency(),
        sa,
        sb,
        map: BTreeMap::new(),
        used: BTreeSet::new(),
    };
    search.go(0)
}

struct IsoSearch<'a> {
    a: &'a Complex,
    b: &'a Complex,
    order: Vec<&'a Vertex>,
    target: Vec<&'a Vertex>,
    sa: BTreeMap<Vertex, Vec<usize>>,
    sb: BTreeMap<Vertex, Vec<usize>>,
    adj_a: BTreeMap<Vertex, BTreeSet<Vertex>>,
    adj_b: BTreeMap<Vertex, BTreeSet<Vertex>>,
    map: BTreeMap<&'a Vertex, &'a Vertex>,
    used: BTreeSet<&'a Vertex>,
}

impl<'a> IsoSearch<'a> {
    fn go(&mut self, i: usize) -> bool {
        let Some(&x) = self.order.get(i) else {
            return self.a.facets().iter().all(|f| {
                let image = Simplex::from_nonempty(f.iter().map(|v| self.map[v].clone()));
                self.b.facets().contains(&image)
            });
        };
        for j in 0..self.target.len() {
            let y = self.target[j];
            if self.used.contains(y) || self.sa[x] != self.sb[y] {
                continue;
            }
            let consistent = self
                .map
                .iter()
                .all(|(p, q)| self.adj_a[x].contains(*p) == self.adj_b[y].contains(*q));
            if !consistent {
                continue;
            }
            self.map.insert(x, y);
            self.used.insert(y);
            if self.go(i + 1) {
                return true;
            }
            self.map.remove(x);
            self.used.remove(y);
        }
        false
    }
}
