//! Abstract simplicial complexes stored by their facets.

mod label;
mod mapping;
mod subdivision;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use label::{decode_members, encode_set, LabelError, NestedLabel};
pub(crate) use mapping::image_under;
pub use mapping::{parse_assignment, SimplicialMapping, Witness};
pub use subdivision::{bary, bary_t, SubdividedComplex, DEFAULT_MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("a simplex must have at least one vertex")]
    EmptySimplex,
    #[error("vertex {0} has no image under the assignment")]
    PartialAssignment(Vertex),
    #[error("subdivision would have {vertices} vertices, above the cap of {cap}")]
    ResourceLimit { vertices: usize, cap: usize },
}

/// An opaque vertex label. Ordering is the string ordering of the label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(Arc<str>);

impl Vertex {
    pub fn new(label: impl AsRef<str>) -> Self {
        Vertex(Arc::from(label.as_ref()))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Vertex {
    fn from(s: &str) -> Self {
        Vertex::new(s)
    }
}

impl From<String> for Vertex {
    fn from(s: String) -> Self {
        Vertex(Arc::from(s))
    }
}

impl From<&Vertex> for Vertex {
    fn from(v: &Vertex) -> Self {
        v.clone()
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d).map(Vertex::from)
    }
}

/// A nonempty finite set of vertices, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new<V: Into<Vertex>>(vertices: impl IntoIterator<Item = V>) -> Result<Self, ComplexError> {
        let mut v: Vec<Vertex> = vertices.into_iter().map(Into::into).collect();
        if v.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        v.sort_unstable();
        v.dedup();
        Ok(Simplex(v))
    }

    pub fn vertex(v: impl Into<Vertex>) -> Self {
        Simplex(vec![v.into()])
    }

    /// Builds from an iterator already known to be nonempty.
    ///
    /// # Panics
    /// If the iterator is empty.
    pub fn from_nonempty<V: Into<Vertex>>(vertices: impl IntoIterator<Item = V>) -> Self {
        Simplex::new(vertices).expect("nonempty vertex set")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, v: &Vertex) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<Vertex> = self.0.iter().merge(other.0.iter()).cloned().collect();
        v.dedup();
        Simplex(v)
    }

    pub fn intersection(&self, other: &Simplex) -> Option<Simplex> {
        let v: Vec<Vertex> = self.0.iter().filter(|x| other.contains_vertex(x)).cloned().collect();
        (!v.is_empty()).then_some(Simplex(v))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (1..=self.0.len()).flat_map(move |k| self.faces_of_size(k))
    }

    pub fn faces_of_size(&self, k: usize) -> impl Iterator<Item = Simplex> + '_ {
        self.0.iter().cloned().combinations(k).map(Simplex)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vertex> {
        self.0.iter()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(","))
    }
}

impl<'a> IntoIterator for &'a Simplex {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Serialize for Simplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<Vertex>::deserialize(d)?;
        Simplex::new(v).map_err(serde::de::Error::custom)
    }
}

fn is_sorted_subset(a: &[Vertex], b: &[Vertex]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// A finite abstract simplicial complex, represented by its facets.
///
/// Membership of a simplex is containment in some facet. Facets and vertices
/// are kept in canonical (sorted) order, so structural equality is equality
/// of complexes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Complex {
    facets: Vec<Simplex>,
    vertices: Vec<Vertex>,
}

impl Complex {
    pub fn empty() -> Self {
        Complex::default()
    }

    /// Builds a complex from arbitrary simplices, dropping dominated ones.
    pub fn from_facets(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut all: Vec<Simplex> = simplices.into_iter().collect();
        all.sort_unstable();
        all.dedup();
        all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut kept: Vec<Simplex> = Vec::with_capacity(all.len());
        for s in all {
            if !kept.iter().any(|f| s.is_subset_of(f)) {
                kept.push(s);
            }
        }
        kept.sort_unstable();
        let vertices: BTreeSet<Vertex> = kept.iter().flat_map(|f| f.0.iter().cloned()).collect();
        Complex {
            facets: kept,
            vertices: vertices.into_iter().collect(),
        }
    }

    /// Builds from simplices known to be pairwise incomparable.
    pub(crate) fn from_antichain(mut facets: Vec<Simplex>) -> Self {
        facets.sort_unstable();
        facets.dedup();
        let vertices: BTreeSet<Vertex> = facets.iter().flat_map(|f| f.0.iter().cloned()).collect();
        Complex {
            facets,
            vertices: vertices.into_iter().collect(),
        }
    }

    /// Builds a complex from label sets; any empty set is an error.
    pub fn build<F, V>(facets: impl IntoIterator<Item = F>) -> Result<Self, ComplexError>
    where
        F: IntoIterator<Item = V>,
        V: Into<Vertex>,
    {
        let simplices = facets.into_iter().map(Simplex::new).collect::<Result<Vec<_>, _>>()?;
        Ok(Complex::from_facets(simplices))
    }

    /// The complex made of one simplex and its faces.
    pub fn simplex(s: &Simplex) -> Self {
        Complex {
            facets: vec![s.clone()],
            vertices: s.0.clone(),
        }
    }

    /// The full simplex on the given vertices.
    pub fn full<V: Into<Vertex>>(vertices: impl IntoIterator<Item = V>) -> Result<Self, ComplexError> {
        Ok(Complex::simplex(&Simplex::new(vertices)?))
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(Simplex::dim).max()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.facets.iter().any(|f| s.is_subset_of(f))
    }

    pub fn contains_vertex(&self, v: &Vertex) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    /// Every simplex of the complex, in canonical order.
    pub fn simplices(&self) -> BTreeSet<Simplex> {
        self.facets.iter().flat_map(|f| f.faces().collect::<Vec<_>>()).collect()
    }

    /// All simplices of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> Complex {
        if self.dim().is_none_or(|k| k <= d) {
            return self.clone();
        }
        Complex::from_facets(self.facets.iter().flat_map(|f| {
            if f.len() <= d + 1 {
                vec![f.clone()]
            } else {
                f.faces_of_size(d + 1).collect()
            }
        }))
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.facets.iter().all(|f| other.contains(f))
    }

    pub fn intersection(&self, other: &Complex) -> Complex {
        Complex::from_facets(
            self.facets
                .iter()
                .flat_map(|f| other.facets.iter().filter_map(move |g| f.intersection(g))),
        )
    }

    pub fn union(&self, other: &Complex) -> Complex {
        Complex::from_facets(self.facets.iter().chain(other.facets.iter()).cloned())
    }

    /// The subcomplex induced by a vertex set.
    pub fn induced<'a>(&self, vertices: impl IntoIterator<Item = &'a Vertex>) -> Complex {
        let keep: BTreeSet<&Vertex> = vertices.into_iter().collect();
        Complex::from_facets(self.facets.iter().filter_map(|f| {
            let v: Vec<Vertex> = f.0.iter().filter(|x| keep.contains(x)).cloned().collect();
            (!v.is_empty()).then_some(Simplex(v))
        }))
    }

    /// Adjacency of the 1-skeleton; isolated vertices map to an empty set.
    pub fn adjacency(&self) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> =
            self.vertices.iter().map(|v| (v.clone(), BTreeSet::new())).collect();
        for f in &self.facets {
            for (a, b) in f.0.iter().tuple_combinations() {
                adj.get_mut(a).unwrap().insert(b.clone());
                adj.get_mut(b).unwrap().insert(a.clone());
            }
        }
        adj
    }

    /// Vertex sets of the connected components of the 1-skeleton.
    ///
    /// Each component is sorted, and components are ordered by their minimal
    /// vertex label.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let adj = self.adjacency();
        let mut seen: BTreeSet<&Vertex> = BTreeSet::new();
        let mut out = Vec::new();
        for v in &self.vertices {
            if seen.contains(v) {
                continue;
            }
            let mut comp = vec![v.clone()];
            seen.insert(v);
            let mut queue = VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                for w in &adj[u] {
                    if seen.insert(w) {
                        comp.push(w.clone());
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Index of the component containing each vertex.
    pub fn component_index(&self) -> BTreeMap<Vertex, usize> {
        self.connected_components()
            .into_iter()
            .enumerate()
            .flat_map(|(i, c)| c.into_iter().map(move |v| (v, i)))
            .collect()
    }

    /// Shortest-path distances in the 1-skeleton from `source`.
    pub fn distances_from(&self, source: &Vertex) -> BTreeMap<Vertex, usize> {
        let adj = self.adjacency();
        let mut dist = BTreeMap::new();
        if !adj.contains_key(source) {
            return dist;
        }
        dist.insert(source.clone(), 0);
        let mut queue = VecDeque::from([source.clone()]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            for w in &adj[&u] {
                if !dist.contains_key(w) {
                    dist.insert(w.clone(), d + 1);
                    queue.push_back(w.clone());
                }
            }
        }
        dist
    }

    /// Largest graph diameter over the connected components of the 1-skeleton.
    pub fn component_diameter(&self) -> usize {
        self.vertices
            .iter()
            .map(|v| self.distances_from(v).into_values().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// For each component: is every vertex subset of dimension at most `d` a simplex?
    pub fn is_complete_up_to(&self, d: usize) -> Vec<(Vec<Vertex>, bool)> {
        self.connected_components()
            .into_iter()
            .map(|c| {
                let complete = if c.len() <= d + 1 {
                    self.contains(&Simplex(c.clone()))
                } else {
                    c.iter()
                        .cloned()
                        .combinations(d + 1)
                        .all(|s| self.contains(&Simplex(s)))
                };
                (c, complete)
            })
            .collect()
    }

    /// Closed star of a vertex: the facets containing it, with their faces.
    pub fn star(&self, v: &Vertex) -> Complex {
        Complex::from_facets(self.facets.iter().filter(|f| f.contains_vertex(v)).cloned())
    }

    /// Renames every vertex through `f`.
    pub fn relabel(&self, mut f: impl FnMut(&Vertex) -> Vertex) -> Complex {
        Complex::from_facets(
            self.facets
                .iter()
                .map(|s| Simplex::from_nonempty(s.0.iter().map(&mut f))),
        )
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {} {{\n", quote(name));
        for v in &self.vertices {
            out.push_str(&format!("  {};\n", quote(v.label())));
        }
        let edges: BTreeSet<(&Vertex, &Vertex)> = self
            .facets
            .iter()
            .flat_map(|f| f.0.iter().tuple_combinations::<(_, _)>())
            .collect();
        for (a, b) in edges {
            out.push_str(&format!("  {} -- {};\n", quote(a.label()), quote(b.label())));
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex{{{}}}", self.facets.iter().join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    facets: Vec<Vec<Vertex>>,
}

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ComplexJson {
            facets: self.facets.iter().map(|f| f.0.clone()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ComplexJson::deserialize(d)?;
        Complex::build(raw.facets).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(facets: &[&[&str]]) -> Complex {
        Complex::build(facets.iter().map(|f| f.iter().copied())).unwrap()
    }

    fn s(v: &[&str]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn build_complex_examples() {
        let k = c(&[&["a", "b"], &["b", "c"]]);
        assert_eq!(k.vertices().len(), 3);
        assert_eq!(k.dim(), Some(1));
        assert_eq!(k.facets().len(), 2);

        let c6 = c(&[
            &["v0", "v1"],
            &["v1", "v2"],
            &["v2", "v3"],
            &["v3", "v4"],
            &["v4", "v5"],
            &["v5", "v0"],
        ]);
        assert_eq!(c6.vertices().len(), 6);
        assert_eq!(c6.facets().len(), 6);
        assert_eq!(c6.connected_components().len(), 1);
        assert_eq!(c6.component_diameter(), 3);

        let dominated = c(&[&["a", "b"], &["a"]]);
        assert_eq!(dominated.facets(), &[s(&["a", "b"])]);

        let empty: Vec<Vec<&str>> = vec![vec![]];
        assert_eq!(Complex::build(empty), Err(ComplexError::EmptySimplex));
    }

    #[test]
    fn skeleton_examples() {
        let tri = Complex::full(["1", "2", "3"]).unwrap();
        assert_eq!(tri.skeleton(1), c(&[&["1", "2"], &["2", "3"], &["1", "3"]]));
        assert_eq!(tri.skeleton(2), tri);
        let tet = Complex::full(["1", "2", "3", "4"]).unwrap();
        let sk = tet.skeleton(2);
        assert_eq!(sk.facets().len(), 4);
        assert!(!sk.contains(&s(&["1", "2", "3", "4"])));
        assert_eq!(sk.dim(), Some(2));
    }

    #[test]
    fn components_and_diameter() {
        let hex_edge = c(&[&["v0", "v1"], &["v3", "v4"]]);
        assert_eq!(
            hex_edge.connected_components(),
            vec![
                vec![Vertex::new("v0"), Vertex::new("v1")],
                vec![Vertex::new("v3"), Vertex::new("v4")]
            ]
        );
        assert_eq!(hex_edge.component_diameter(), 1);
        assert!(hex_edge.is_complete_up_to(1).iter().all(|(_, ok)| *ok));

        assert_eq!(Complex::full(["x", "y"]).unwrap().component_diameter(), 1);
        assert_eq!(Complex::full(["x"]).unwrap().component_diameter(), 0);
        assert_eq!(Complex::full(["x", "y", "z"]).unwrap().connected_components().len(), 1);
    }

    #[test]
    fn completeness() {
        let tri = Complex::full(["1", "2", "3"]).unwrap();
        assert!(tri.is_complete_up_to(2)[0].1);
        let cyc = tri.skeleton(1);
        assert!(!cyc.is_complete_up_to(2)[0].1);
        assert!(cyc.is_complete_up_to(1)[0].1);
    }

    #[test]
    fn intersection_and_induced() {
        let a = c(&[&["1", "2", "3"]]);
        let b = c(&[&["2", "3", "4"], &["1", "4"]]);
        assert_eq!(a.intersection(&b), c(&[&["2", "3"], &["1"]]));
        let path = c(&[&["0", "1"], &["1", "2"], &["2", "3"]]);
        assert_eq!(
            path.induced([&Vertex::new("0"), &Vertex::new("2"), &Vertex::new("3")]),
            c(&[&["0"], &["2", "3"]])
        );
    }

    #[test]
    fn json_is_canonical() {
        let k: Complex = serde_json::from_str(r#"{"facets":[["c","b"],["b","a"],["a"]]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&k).unwrap(),
            r#"{"facets":[["a","b"],["b","c"]]}"#
        );
        assert!(serde_json::from_str::<Complex>(r#"{"facets":[[]]}"#).is_err());
    }

    #[test]
    fn dot_export() {
        let k = c(&[&["a", "b"], &["c"]]);
        assert_eq!(
            k.to_dot("K"),
            "graph \"K\" {\n  \"a\";\n  \"b\";\n  \"c\";\n  \"a\" -- \"b\";\n}\n"
        );
    }
}
