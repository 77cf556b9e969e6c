use std::collections::BTreeMap;

use itertools::Itertools;

use super::{encode_set, Complex, ComplexError, Simplex, Vertex};

pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

/// A complex obtained from a base complex by repeated barycentric subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdividedComplex {
    complex: Complex,
    carriers: BTreeMap<Vertex, Simplex>,
    level: usize,
}

impl SubdividedComplex {
    /// The base complex itself, at level 0 with identity carriers.
    pub fn base(k: &Complex) -> Self {
        SubdividedComplex {
            complex: k.clone(),
            carriers: k
                .vertices()
                .iter()
                .map(|v| (v.clone(), Simplex::vertex(v.clone())))
                .collect(),
            level: 0,
        }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn carriers(&self) -> &BTreeMap<Vertex, Simplex> {
        &self.carriers
    }

    pub fn carrier(&self, v: &Vertex) -> Option<&Simplex> {
        self.carriers.get(v)
    }

    /// Union of the carriers of the vertices of `s`.
    ///
    /// # Panics
    /// If some vertex of `s` is not a vertex of this complex.
    pub fn carrier_of(&self, s: &Simplex) -> Simplex {
        s.iter()
            .map(|v| &self.carriers[v])
            .fold(None::<Simplex>, |acc, c| {
                Some(acc.map_or_else(|| c.clone(), |a| a.union(c)))
            })
            .expect("simplex is nonempty")
    }

    /// One more barycentric subdivision.
    pub fn subdivide(&self, max_vertices: usize) -> Result<SubdividedComplex, ComplexError> {
        let count = self.complex.simplices().len();
        if count > max_vertices {
            return Err(ComplexError::ResourceLimit {
                vertices: count,
                cap: max_vertices,
            });
        }
        let mut carriers = BTreeMap::new();
        let mut facets = Vec::new();
        for f in self.complex.facets() {
            let verts = f.vertices();
            let s = verts.len();
            let mut labels: Vec<Option<Vertex>> = vec![None; 1 << s];
            for (mask, slot) in labels.iter_mut().enumerate().skip(1) {
                let members = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| &verts[i]);
                let label = encode_set(members.clone());
                carriers.entry(label.clone()).or_insert_with(|| {
                    let sub = Simplex::from_nonempty(members.cloned());
                    self.carrier_of(&sub)
                });
                *slot = Some(label);
            }
            for perm in (0..s).permutations(s) {
                let mut mask = 0usize;
                let chain = perm.iter().map(|&i| {
                    mask |= 1 << i;
                    labels[mask].clone().unwrap()
                });
                facets.push(Simplex::from_nonempty(chain.collect::<Vec<_>>()));
            }
        }
        Ok(SubdividedComplex {
            complex: Complex::from_antichain(facets),
            carriers,
            level: self.level + 1,
        })
    }
}

/// Barycentric subdivision of `k`, without a vertex cap.
pub fn bary(k: &Complex) -> SubdividedComplex {
    SubdividedComplex::base(k)
        .subdivide(usize::MAX)
        .expect("uncapped subdivision")
}

/// `t` successive barycentric subdivisions of `k`.
pub fn bary_t(k: &Complex, t: usize, max_vertices: usize) -> Result<SubdividedComplex, ComplexError> {
    let mut cur = SubdividedComplex::base(k);
    for _ in 0..t {
        cur = cur.subdivide(max_vertices)?;
    }
    if cur.complex.vertices().len() > max_vertices {
        return Err(ComplexError::ResourceLimit {
            vertices: cur.complex.vertices().len(),
            cap: max_vertices,
        });
    }
    Ok(cur)
}
