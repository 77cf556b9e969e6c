//! Backtracking search over dense variable and value ids.
//!
//! Variables are source vertices and values are target vertices, both
//! numbered in label order. Domains are bitmasks, so the target is limited to
//! 128 vertices. Each constraint is a set of variables together with the
//! facets (as masks) of the complex their joint image must lie in. Because
//! complexes are closed under faces, a partial image must already be inside
//! some facet, and an unassigned variable of the constraint may only take
//! values from the union of the facets that contain the partial image.

use super::SearchStats;

pub(super) const MAX_TARGET: usize = 128;

pub(super) struct Constraint {
    pub vars: Vec<u32>,
    pub facets: Vec<u128>,
}

pub(super) struct Csp {
    pub domains: Vec<u128>,
    pub pinned: Vec<Option<u8>>,
    pub constraints: Vec<Constraint>,
}

pub(super) enum Outcome {
    Found(Vec<u8>),
    Exhausted,
    Budget,
}

const UNSET: u8 = u8::MAX;

struct Frame {
    var: usize,
    candidates: u128,
    trail_mark: usize,
}

struct State<'a> {
    csp: &'a Csp,
    incident: Vec<Vec<u32>>,
    degree: Vec<usize>,
    domains: Vec<u128>,
    value: Vec<u8>,
    trail: Vec<(u32, u128)>,
}

impl State<'_> {
    fn set_domain(&mut self, var: usize, d: u128) {
        if self.domains[var] != d {
            self.trail.push((var as u32, self.domains[var]));
            self.domains[var] = d;
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, d) = self.trail.pop().unwrap();
            self.domains[v as usize] = d;
        }
    }

    /// Narrows domains through every constraint touching `var`; false on a wipe-out.
    fn propagate(&mut self, var: usize) -> bool {
        let csp = self.csp;
        for ci in 0..self.incident[var].len() {
            let c = &csp.constraints[self.incident[var][ci] as usize];
            let mut assigned = 0u128;
            for &u in &c.vars {
                let x = self.value[u as usize];
                if x != UNSET {
                    assigned |= 1u128 << x;
                }
            }
            let mut allowed = 0u128;
            for &f in &c.facets {
                if assigned & !f == 0 {
                    allowed |= f;
                }
            }
            if allowed == 0 {
                return false;
            }
            for &u in &c.vars {
                let u = u as usize;
                if self.value[u] == UNSET {
                    let d = self.domains[u] & allowed;
                    if d == 0 {
                        return false;
                    }
                    self.set_domain(u, d);
                }
            }
        }
        true
    }

    fn assign(&mut self, var: usize, x: u8) -> bool {
        self.value[var] = x;
        self.set_domain(var, 1u128 << x);
        self.propagate(var)
    }

    /// Smallest domain first, then most constraints, then lowest id.
    fn select(&self) -> Option<usize> {
        let mut best: Option<(u32, std::cmp::Reverse<usize>, usize)> = None;
        for v in 0..self.value.len() {
            if self.value[v] != UNSET {
                continue;
            }
            let key = (self.domains[v].count_ones(), std::cmp::Reverse(self.degree[v]), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        best.map(|b| b.2)
    }
}

pub(super) fn solve(csp: &Csp, max_nodes: u64, stats: &mut SearchStats) -> Outcome {
    let n = csp.domains.len();
    let mut incident = vec![Vec::new(); n];
    for (i, c) in csp.constraints.iter().enumerate() {
        for &v in &c.vars {
            incident[v as usize].push(i as u32);
        }
    }
    let degree = incident.iter().map(Vec::len).collect();
    let mut st = State {
        csp,
        incident,
        degree,
        domains: csp.domains.clone(),
        value: vec![UNSET; n],
        trail: Vec::new(),
    };

    // Constraints restrict every variable to the vertices of their complex.
    for c in &csp.constraints {
        let all = c.facets.iter().fold(0u128, |a, f| a | f);
        for &v in &c.vars {
            st.domains[v as usize] &= all;
        }
    }
    if st.domains.contains(&0) {
        return Outcome::Exhausted;
    }
    for v in 0..n {
        if let Some(x) = csp.pinned[v] {
            if st.domains[v] >> x & 1 == 0 || !st.assign(v, x) {
                return Outcome::Exhausted;
            }
        }
    }
    st.trail.clear();

    let mut stack: Vec<Frame> = Vec::new();
    loop {
        let Some(var) = st.select() else {
            return Outcome::Found(st.value);
        };
        stack.push(Frame {
            var,
            candidates: st.domains[var],
            trail_mark: st.trail.len(),
        });
        loop {
            let Some(top) = stack.last_mut() else {
                return Outcome::Exhausted;
            };
            let (var, mark) = (top.var, top.trail_mark);
            if top.candidates == 0 {
                stack.pop();
                st.value[var] = UNSET;
                st.undo_to(mark);
                continue;
            }
            let x = top.candidates.trailing_zeros() as u8;
            top.candidates &= top.candidates - 1;
            if st.value[var] != UNSET {
                stats.backtracks += 1;
            }
            st.value[var] = UNSET;
            st.undo_to(mark);
            stats.nodes += 1;
            if stats.nodes > max_nodes {
                return Outcome::Budget;
            }
            if st.assign(var, x) {
                break;
            }
        }
    }
}
