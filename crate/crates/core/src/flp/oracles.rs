use std::collections::BTreeMap;

use crate::complex::{bary_t, Complex, NestedLabel, Simplex, Vertex};
use crate::solver::{check_round_witness, Limits};
use crate::task::ColorlessTask;

use super::{children, FlpError, Query, Valency, ValencyAnswer, ValencyOracle};

/// An adversary that never lets the run terminate.
///
/// Each process decides the smallest vertex of its solo image. A subdivision
/// vertex `{w}` keeps the valency of `w`, the middle vertex `{w,w'}` copies
/// the valency of the smaller of `w`, `w'`, and an edge gets the union of its
/// vertices.
#[derive(Clone, Copy, Debug, Default)]
pub struct StubbornOracle;

impl ValencyOracle for StubbornOracle {
    fn initial_valencies(&mut self, task: &ColorlessTask, n: usize) -> Result<ValencyAnswer, FlpError> {
        let mut delta = BTreeMap::new();
        for v in task.input().vertices() {
            let img = task.image(&Simplex::vertex(v.clone()));
            let first = img
                .vertices()
                .first()
                .ok_or_else(|| FlpError::Unsupported(format!("input vertex {v} has an empty image")))?;
            delta.insert(v.clone(), first.clone());
        }
        Ok(task
            .delta()
            .keys()
            .filter(|s| s.dim() < n)
            .map(|s| (s.clone(), s.iter().map(|v| delta[v].clone()).collect()))
            .collect())
    }

    fn answer(&mut self, q: &Query<'_>) -> Result<ValencyAnswer, FlpError> {
        let of = |w: &Vertex| q.vertex_valencies[w].clone();
        let lower = q.current.simplex.vertices()[0].clone();
        let mut vertex_val: BTreeMap<Vertex, Valency> = BTreeMap::new();
        for child in children(&q.current.simplex).into_iter().filter(|s| s.len() == 1) {
            let x = &child.vertices()[0];
            let members = crate::complex::decode_members(x)
                .ok_or_else(|| FlpError::Unsupported(format!("malformed view {x}")))?;
            let v = if members.len() == 1 {
                of(&members[0])
            } else {
                of(&lower)
            };
            vertex_val.insert(x.clone(), v);
        }
        Ok(children(&q.current.simplex)
            .into_iter()
            .map(|s| {
                let v = s.iter().flat_map(|x| vertex_val[x].iter().cloned()).collect();
                (s, v)
            })
            .collect())
    }
}

/// Reports the valencies of an algorithm that actually solves the task in
/// `depth` rounds: a configuration's valency is the set of decisions of its
/// descendants at that depth.
#[derive(Clone, Debug)]
pub struct HonestOracle {
    witness: BTreeMap<Vertex, Vertex>,
    depth: usize,
    limits: Limits,
}

impl HonestOracle {
    pub fn new(
        task: &ColorlessTask,
        n: usize,
        witness: BTreeMap<Vertex, Vertex>,
        depth: usize,
        limits: &Limits,
    ) -> Result<Self, FlpError> {
        let ok = check_round_witness(task, n, depth, &witness, limits)
            .map_err(|e| FlpError::WitnessInvalid(e.to_string()))?;
        if !ok {
            return Err(FlpError::WitnessInvalid(format!(
                "map does not solve the task in {depth} rounds with {n} processes"
            )));
        }
        Ok(HonestOracle {
            witness,
            depth,
            limits: *limits,
        })
    }

    /// Round count of a witness, read off the nesting of its source labels.
    pub fn infer_depth(witness: &BTreeMap<Vertex, Vertex>) -> Option<usize> {
        let v = witness.keys().next()?;
        NestedLabel::decode(v.label()).ok().map(|l| l.depth())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn valency(&self, s: &Simplex, level: usize) -> Result<Valency, FlpError> {
        let rest = self.depth.checked_sub(level).ok_or_else(|| {
            FlpError::Unsupported(format!("honest oracle queried below its decision depth {}", self.depth))
        })?;
        let sub =
            bary_t(&Complex::simplex(s), rest, self.limits.max_vertices).map_err(crate::solver::SolverError::from)?;
        sub.complex()
            .vertices()
            .iter()
            .map(|x| {
                self.witness
                    .get(x)
                    .cloned()
                    .ok_or_else(|| FlpError::WitnessInvalid(format!("no value for {x}")))
            })
            .collect()
    }
}

impl ValencyOracle for HonestOracle {
    fn initial_valencies(&mut self, task: &ColorlessTask, n: usize) -> Result<ValencyAnswer, FlpError> {
        task.delta()
            .keys()
            .filter(|s| s.dim() < n)
            .map(|s| Ok((s.clone(), self.valency(s, 0)?)))
            .collect()
    }

    fn answer(&mut self, q: &Query<'_>) -> Result<ValencyAnswer, FlpError> {
        let level = q.current.level + 1;
        children(&q.current.simplex)
            .into_iter()
            .map(|s| {
                let v = self.valency(&s, level)?;
                Ok((s, v))
            })
            .collect()
    }
}
