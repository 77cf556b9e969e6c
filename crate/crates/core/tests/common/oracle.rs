//! Brute-force references that share no code with the library's search.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use wfdecide::complex::{Complex, Simplex, Vertex};
use wfdecide::solver::MapSearchProblem;

/// Number of assignments a brute-force pass would enumerate.
pub fn assignment_count(p: &MapSearchProblem) -> u128 {
    p.source
        .vertices()
        .iter()
        .map(|v| candidates(p, v).len() as u128)
        .product()
}

fn candidates(p: &MapSearchProblem, v: &Vertex) -> Vec<Vertex> {
    if let Some(x) = p.pinned.get(v) {
        return vec![x.clone()];
    }
    match p.domains.get(v) {
        Some(d) => d.iter().cloned().collect(),
        None => p.target.vertices().to_vec(),
    }
}

fn image(f: &BTreeMap<Vertex, Vertex>, s: &Simplex) -> Simplex {
    let set: BTreeSet<Vertex> = s.iter().map(|v| f[v].clone()).collect();
    Simplex::new(set).unwrap()
}

pub fn satisfies(p: &MapSearchProblem, f: &BTreeMap<Vertex, Vertex>) -> bool {
    p.source.facets().iter().all(|s| p.target.contains(&image(f, s)))
        && p.constraints.iter().all(|(s, k)| k.contains(&image(f, s)))
        && p.pinned.iter().all(|(v, x)| &f[v] == x)
        && p.domains.iter().all(|(v, d)| d.contains(&f[v]))
}

/// Exhaustive enumeration; `Some` with the first satisfying assignment.
pub fn brute_force(p: &MapSearchProblem) -> Option<BTreeMap<Vertex, Vertex>> {
    let vs: Vec<Vertex> = p.source.vertices().to_vec();
    let cands: Vec<Vec<Vertex>> = vs.iter().map(|v| candidates(p, v)).collect();
    if cands.iter().any(Vec::is_empty) {
        return None;
    }
    let mut idx = vec![0usize; vs.len()];
    loop {
        let f: BTreeMap<Vertex, Vertex> = vs
            .iter()
            .zip(&idx)
            .zip(&cands)
            .map(|((v, &i), c)| (v.clone(), c[i].clone()))
            .collect();
        if satisfies(p, &f) {
            return Some(f);
        }
        let mut k = 0;
        loop {
            if k == vs.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Path distances in the 1-skeleton of `k` by breadth-first search.
pub fn bfs_distance(k: &Complex, a: &Vertex, b: &Vertex) -> Option<usize> {
    let mut adj: BTreeMap<&Vertex, Vec<&Vertex>> = BTreeMap::new();
    for f in k.facets() {
        for x in f.iter() {
            for y in f.iter() {
                if x != y {
                    adj.entry(x).or_default().push(y);
                }
            }
        }
    }
    let mut dist = BTreeMap::from([(a, 0usize)]);
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            return Some(dist[x]);
        }
        for &y in adj.get(x).into_iter().flatten() {
            if !dist.contains_key(y) {
                dist.insert(y, dist[x] + 1);
                queue.push_back(y);
            }
        }
    }
    None
}

/// Vertex partition into connected components, by union-find over facets.
pub fn components(k: &Complex) -> BTreeSet<BTreeSet<Vertex>> {
    let vs: Vec<&Vertex> = k.vertices().iter().collect();
    let pos: BTreeMap<&Vertex, usize> = vs.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut parent: Vec<usize> = (0..vs.len()).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for f in k.facets() {
        let first = pos[&f.vertices()[0]];
        for v in f.iter() {
            let (a, b) = (root(&mut parent, first), root(&mut parent, pos[v]));
            parent[a] = b;
        }
    }
    let mut out: BTreeMap<usize, BTreeSet<Vertex>> = BTreeMap::new();
    for (i, v) in vs.iter().enumerate() {
        let r = root(&mut parent, i);
        out.entry(r).or_default().insert((*v).clone());
    }
    out.into_values().collect()
}
