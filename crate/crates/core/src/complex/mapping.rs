use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Complex, ComplexError, Simplex, Vertex};

/// A vertex map between two complexes.
///
/// Only the assignment is serialized; source and target are supplied by the
/// context the witness is checked in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMapping {
    pub source: Complex,
    pub target: Complex,
    pub assignment: BTreeMap<Vertex, Vertex>,
}

/// Serialized form of a vertex map: `{"assignment": {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub assignment: BTreeMap<Vertex, Vertex>,
}

impl Serialize for SimplicialMapping {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Witness {
            assignment: self.assignment.clone(),
        }
        .serialize(s)
    }
}

/// Reads the `{"assignment": {...}}` form of a witness.
pub fn parse_assignment(json: &str) -> Result<BTreeMap<Vertex, Vertex>, serde_json::Error> {
    serde_json::from_str::<Witness>(json).map(|a| a.assignment)
}

impl SimplicialMapping {
    pub fn new(source: Complex, target: Complex, assignment: BTreeMap<Vertex, Vertex>) -> Self {
        SimplicialMapping {
            source,
            target,
            assignment,
        }
    }

    pub fn identity(k: &Complex) -> Self {
        SimplicialMapping {
            source: k.clone(),
            target: k.clone(),
            assignment: k.vertices().iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    pub fn witness(&self) -> Witness {
        Witness {
            assignment: self.assignment.clone(),
        }
    }

    pub fn get(&self, v: &Vertex) -> Option<&Vertex> {
        self.assignment.get(v)
    }

    /// Image of a source simplex.
    pub fn image_of(&self, s: &Simplex) -> Result<Simplex, ComplexError> {
        image_under(&self.assignment, s)
    }

    /// True iff every source facet is sent to a simplex of the target.
    pub fn check_simplicial(&self) -> Result<bool, ComplexError> {
        if let Some(v) = self
            .source
            .vertices()
            .iter()
            .find(|v| !self.assignment.contains_key(*v))
        {
            return Err(ComplexError::PartialAssignment(v.clone()));
        }
        for f in self.source.facets() {
            if !self.target.contains(&self.image_of(f)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `other ∘ self`.
    pub fn compose(&self, other: &SimplicialMapping) -> Result<SimplicialMapping, ComplexError> {
        let assignment = self
            .assignment
            .iter()
            .map(|(k, v)| {
                other
                    .assignment
                    .get(v)
                    .map(|w| (k.clone(), w.clone()))
                    .ok_or_else(|| ComplexError::PartialAssignment(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(SimplicialMapping {
            source: self.source.clone(),
            target: other.target.clone(),
            assignment,
        })
    }

    /// The subcomplex of the target hit by source facets.
    pub fn image(&self) -> Result<Complex, ComplexError> {
        let facets = self
            .source
            .facets()
            .iter()
            .map(|f| self.image_of(f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Complex::from_facets(facets))
    }
}

pub(crate) fn image_under(assignment: &BTreeMap<Vertex, Vertex>, s: &Simplex) -> Result<Simplex, ComplexError> {
    let img = s
        .iter()
        .map(|v| {
            assignment
                .get(v)
                .cloned()
                .ok_or_else(|| ComplexError::PartialAssignment(v.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Simplex::new(img)
}
