use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use wfdecide::complex::{Complex, Simplex, Vertex};
use wfdecide::solver::MapSearchProblem;
use wfdecide::task::ColorlessTask;

fn random_simplex(rng: &mut ChaCha8Rng, pool: &[Vertex], min_len: usize, max_len: usize) -> Simplex {
    let len = rng.gen_range(min_len..=max_len.min(pool.len()));
    Simplex::new(pool.choose_multiple(rng, len).cloned()).unwrap()
}

pub fn random_complex(rng: &mut ChaCha8Rng, pool: &[Vertex], facets: usize, max_len: usize) -> Complex {
    random_complex_sized(rng, pool, facets, 1, max_len)
}

fn random_complex_sized(
    rng: &mut ChaCha8Rng,
    pool: &[Vertex],
    facets: usize,
    min_len: usize,
    max_len: usize,
) -> Complex {
    let mut fs: Vec<Simplex> = (0..facets)
        .map(|_| random_simplex(rng, pool, min_len, max_len))
        .collect();
    let covered: BTreeSet<&Vertex> = fs.iter().flat_map(|f| f.iter()).collect();
    let missing: Vec<Vertex> = pool.iter().filter(|v| !covered.contains(v)).cloned().collect();
    fs.extend(missing.into_iter().map(Simplex::vertex));
    Complex::from_facets(fs)
}

fn pool(prefix: &str, n: usize) -> Vec<Vertex> {
    (0..n).map(|i| Vertex::new(format!("{prefix}{i}"))).collect()
}

/// A carrier task with at most 4 input and 6 output vertices, built bottom-up
/// so every image contains the images of its faces.
pub fn random_carrier_task(rng: &mut ChaCha8Rng) -> ColorlessTask {
    let inputs = pool("a", rng.gen_range(2..=4));
    let outputs = pool("y", rng.gen_range(3..=6));
    let facet_count = rng.gen_range(1..=3);
    let input = random_complex_sized(rng, &inputs, facet_count, 2, 3);

    let mut simplices: Vec<Simplex> = input.simplices().into_iter().collect();
    simplices.sort_by_key(Simplex::len);
    let mut delta: BTreeMap<Simplex, Complex> = BTreeMap::new();
    for s in simplices {
        let mut img = Complex::empty();
        for f in s.faces().filter(|f| f != &s) {
            img = img.union(&delta[&f]);
        }
        let extra = if s.len() == 1 {
            rng.gen_range(1..=2)
        } else {
            rng.gen_range(0..=2)
        };
        for _ in 0..extra {
            img = img.union(&Complex::simplex(&random_simplex(rng, &outputs, 1, s.len())));
        }
        delta.insert(s, img);
    }
    let output = delta.values().fold(Complex::empty(), |a, c| a.union(c));
    ColorlessTask::new(input, output, delta).unwrap()
}

/// A simplicial map search problem with at most 6 source and 6 target vertices.
pub fn random_problem(rng: &mut ChaCha8Rng) -> MapSearchProblem {
    let src = pool("s", rng.gen_range(1..=6));
    let tgt = pool("t", rng.gen_range(1..=6));
    let fs = rng.gen_range(1..=4);
    let source = random_complex(rng, &src, fs, 3);
    let ft = rng.gen_range(1..=5);
    let target = random_complex(rng, &tgt, ft, 3);
    let mut p = MapSearchProblem::new(source.clone(), target.clone());
    for v in source.vertices() {
        match rng.gen_range(0..5) {
            0 | 1 => {
                p.pinned.insert(v.clone(), tgt.choose(rng).unwrap().clone());
            }
            2 => {
                let k = rng.gen_range(1..=tgt.len());
                p.domains
                    .insert(v.clone(), tgt.choose_multiple(rng, k).cloned().collect());
            }
            _ => {}
        }
    }
    for s in source.simplices() {
        if s.len() > 1 && rng.gen_bool(0.4) {
            let k = rng.gen_range(1..=3);
            let sub = random_complex(rng, &tgt, k, s.len());
            p.constraints.insert(s, sub.intersection(&target));
        }
    }
    p
}
