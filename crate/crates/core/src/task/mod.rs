//! Colorless tasks: representation, validation and local tasks.

mod generators;
mod json;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::complex::{Complex, ComplexError, Simplex, Vertex};

pub use generators::{gen_epsilon_agreement, gen_hexagon, gen_set_agreement, TaskId};
pub use json::{parse_task_json, task_to_json, TaskJson};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaskError {
    #[error("image of {simplex} has dimension {image_dim}, above {dim}")]
    DimensionViolation {
        simplex: Simplex,
        dim: usize,
        image_dim: usize,
    },
    #[error("image of {face} is not contained in the image of {coface}")]
    CarrierViolation { face: Simplex, coface: Simplex },
    #[error("image of {simplex} uses vertex {vertex}, which is not an output vertex")]
    DanglingOutputVertex { simplex: Simplex, vertex: Vertex },
    #[error("image of {simplex} contains {face}, which is not an output simplex")]
    NotInOutput { simplex: Simplex, face: Simplex },
    #[error("image of {simplex} is empty")]
    EmptyImage { simplex: Simplex },
    #[error("no image given for input simplex {simplex}")]
    MissingDelta { simplex: Simplex },
    #[error("image given for {simplex}, which is not an input simplex")]
    UnknownInputSimplex { simplex: Simplex },
    #[error("image given twice for {simplex}")]
    DuplicateDelta { simplex: Simplex },
    #[error("vertex {vertex} is not in the image of {simplex}")]
    VertexNotInImage { vertex: Vertex, simplex: Simplex },
    #[error("vertex label {label:?} is empty or uses one of the reserved characters {{ }} ,")]
    ReservedLabel { label: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown task {0:?}")]
    UnknownTask(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A colorless task `(I, O, Δ)`, with `Δ` given for every simplex of `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorlessTask {
    input: Complex,
    output: Complex,
    delta: BTreeMap<Simplex, Complex>,
}

impl ColorlessTask {
    /// Checks only that `delta` is defined exactly on the simplices of `input`.
    pub fn new(input: Complex, output: Complex, delta: BTreeMap<Simplex, Complex>) -> Result<Self, TaskError> {
        let simplices = input.simplices();
        if let Some(s) = delta.keys().find(|s| !simplices.contains(*s)) {
            return Err(TaskError::UnknownInputSimplex { simplex: s.clone() });
        }
        if let Some(s) = simplices.iter().find(|s| !delta.contains_key(*s)) {
            return Err(TaskError::MissingDelta { simplex: s.clone() });
        }
        Ok(ColorlessTask { input, output, delta })
    }

    pub fn input(&self) -> &Complex {
        &self.input
    }

    pub fn output(&self) -> &Complex {
        &self.output
    }

    pub fn delta(&self) -> &BTreeMap<Simplex, Complex> {
        &self.delta
    }

    /// `Δ(σ)`.
    ///
    /// # Panics
    /// If `σ` is not a simplex of the input complex.
    pub fn image(&self, sigma: &Simplex) -> &Complex {
        self.delta
            .get(sigma)
            .unwrap_or_else(|| panic!("{sigma} is not an input simplex"))
    }

    pub fn try_image(&self, sigma: &Simplex) -> Option<&Complex> {
        self.delta.get(sigma)
    }

    /// Smallest process count that exercises all of the input.
    pub fn default_processes(&self) -> usize {
        self.input.dim().map_or(1, |d| d + 1)
    }

    /// True iff `σ ⊆ σ'` implies `Δ(σ) ⊆ Δ(σ')`.
    pub fn is_carrier_map(&self) -> bool {
        self.carrier_violation().is_none()
    }

    fn carrier_violation(&self) -> Option<(Simplex, Simplex)> {
        for (sigma, img) in &self.delta {
            for coface in self.immediate_cofaces(sigma) {
                if !img.is_subcomplex_of(&self.delta[&coface]) {
                    return Some((sigma.clone(), coface));
                }
            }
        }
        None
    }

    fn immediate_cofaces(&self, sigma: &Simplex) -> Vec<Simplex> {
        let mut out: Vec<Simplex> = self
            .input
            .vertices()
            .iter()
            .filter(|v| !sigma.contains_vertex(v))
            .map(|v| sigma.union(&Simplex::vertex(v.clone())))
            .filter(|s| self.input.contains(s))
            .collect();
        out.sort_unstable();
        out
    }

    /// Intersection of `Δ(σ)` over input simplices `σ ⊇ c` of dimension at
    /// most `max_dim`. Equals `Δ(c)` when `Δ` is a carrier map.
    pub fn effective_image(&self, c: &Simplex, max_dim: usize) -> Complex {
        let mut acc = self.image(c).clone();
        for (sigma, img) in &self.delta {
            if sigma != c && sigma.dim() <= max_dim && c.is_subset_of(sigma) {
                acc = acc.intersection(img);
            }
        }
        acc
    }

    /// The same task restricted to input simplices of dimension at most `d`.
    pub fn restrict_input(&self, d: usize) -> ColorlessTask {
        let input = self.input.skeleton(d);
        let delta = self
            .delta
            .iter()
            .filter(|(s, _)| s.dim() <= d)
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect();
        ColorlessTask {
            input,
            output: self.output.clone(),
            delta,
        }
    }
}

impl fmt::Display for ColorlessTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input  {:?}", self.input)?;
        writeln!(f, "output {:?}", self.output)?;
        for (s, c) in &self.delta {
            writeln!(f, "  {s} -> {c:?}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ValidationMode {
    #[default]
    Strict,
    Repair,
    Lenient,
}

impl FromStr for ValidationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ValidationMode::Strict),
            "repair" => Ok(ValidationMode::Repair),
            "lenient" => Ok(ValidationMode::Lenient),
            other => Err(format!("unknown validation mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedTask {
    pub task: ColorlessTask,
    pub warnings: Vec<String>,
    /// False when the task is accepted only leniently and is not a carrier map.
    pub within_assumptions: bool,
}

fn structural_errors(t: &ColorlessTask) -> Vec<TaskError> {
    let mut errs = Vec::new();
    for (sigma, img) in &t.delta {
        if img.is_empty() {
            errs.push(TaskError::EmptyImage { simplex: sigma.clone() });
            continue;
        }
        if let Some(d) = img.dim().filter(|d| *d > sigma.dim()) {
            errs.push(TaskError::DimensionViolation {
                simplex: sigma.clone(),
                dim: sigma.dim(),
                image_dim: d,
            });
        }
        if let Some(v) = img.vertices().iter().find(|v| !t.output.contains_vertex(v)) {
            errs.push(TaskError::DanglingOutputVertex {
                simplex: sigma.clone(),
                vertex: v.clone(),
            });
        } else if let Some(f) = img.facets().iter().find(|f| !t.output.contains(f)) {
            errs.push(TaskError::NotInOutput {
                simplex: sigma.clone(),
                face: f.clone(),
            });
        }
    }
    errs
}

fn strict(t: ColorlessTask) -> Result<ValidatedTask, TaskError> {
    if let Some(e) = structural_errors(&t).into_iter().next() {
        return Err(e);
    }
    if let Some((face, coface)) = t.carrier_violation() {
        return Err(TaskError::CarrierViolation { face, coface });
    }
    Ok(ValidatedTask {
        task: t,
        warnings: Vec::new(),
        within_assumptions: true,
    })
}

/// Checks the dimension, output and carrier conditions on `Δ`.
///
/// `Repair` first intersects each `Δ(σ)` with `Δ(F)` for every input facet
/// `F ⊇ σ`; an image emptied this way cannot be repaired. `Lenient` reports
/// every problem as a warning instead of failing.
pub fn validate_task(t: &ColorlessTask, mode: ValidationMode) -> Result<ValidatedTask, TaskError> {
    match mode {
        ValidationMode::Strict => strict(t.clone()),
        ValidationMode::Repair => {
            let mut delta = BTreeMap::new();
            let mut changed = Vec::new();
            for (sigma, img) in &t.delta {
                let mut new = img.clone();
                for f in t.input.facets().iter().filter(|f| sigma.is_subset_of(f)) {
                    new = new.intersection(&t.delta[f]);
                }
                if new.is_empty() {
                    let coface = t
                        .input
                        .facets()
                        .iter()
                        .find(|f| sigma.is_subset_of(f) && !img.is_subcomplex_of(&t.delta[*f]))
                        .cloned()
                        .unwrap_or_else(|| sigma.clone());
                    return Err(TaskError::CarrierViolation {
                        face: sigma.clone(),
                        coface,
                    });
                }
                if &new != img {
                    changed.push(format!("repaired image of {sigma}"));
                }
                delta.insert(sigma.clone(), new);
            }
            let repaired = ColorlessTask {
                input: t.input.clone(),
                output: t.output.clone(),
                delta,
            };
            let mut v = strict(repaired)?;
            v.warnings = changed;
            Ok(v)
        }
        ValidationMode::Lenient => {
            let mut warnings: Vec<String> = structural_errors(t).iter().map(ToString::to_string).collect();
            let carrier = t.carrier_violation();
            if let Some((face, coface)) = &carrier {
                warnings.push(
                    TaskError::CarrierViolation {
                        face: face.clone(),
                        coface: coface.clone(),
                    }
                    .to_string(),
                );
            }
            Ok(ValidatedTask {
                task: t.clone(),
                within_assumptions: warnings.is_empty(),
                warnings,
            })
        }
    }
}

/// The local task for `σ` and `τ`: input the single simplex `τ`, output
/// `Δ(σ)`, each vertex of `τ` must keep its value, and a face `τ'` with more
/// than one vertex may output any simplex of `Δ(σ)` of dimension at most
/// `dim τ'`.
pub fn local_task(t: &ColorlessTask, sigma: &Simplex, tau: &Simplex) -> Result<ColorlessTask, TaskError> {
    let img = t
        .try_image(sigma)
        .ok_or_else(|| TaskError::UnknownInputSimplex { simplex: sigma.clone() })?;
    if let Some(v) = tau.iter().find(|v| !img.contains_vertex(v)) {
        return Err(TaskError::VertexNotInImage {
            vertex: v.clone(),
            simplex: sigma.clone(),
        });
    }
    let delta = tau
        .faces()
        .map(|f| {
            let c = if f.len() == 1 {
                Complex::simplex(&f)
            } else {
                img.skeleton(f.dim())
            };
            (f, c)
        })
        .collect();
    Ok(ColorlessTask {
        input: Complex::simplex(tau),
        output: img.clone(),
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn c(facets: &[&[&str]]) -> Complex {
        Complex::build(facets.iter().map(|f| f.iter().copied())).unwrap()
    }

    #[test]
    fn hexagon_is_strictly_valid() {
        assert!(validate_task(&gen_hexagon(), ValidationMode::Strict).is_ok());
    }

    #[test]
    fn vertex_image_with_edge_is_dimension_violation() {
        let input = c(&[&["a"]]);
        let output = c(&[&["x", "y"]]);
        let t = ColorlessTask::new(input, output.clone(), BTreeMap::from([(s(&["a"]), output)])).unwrap();
        assert!(matches!(
            validate_task(&t, ValidationMode::Strict),
            Err(TaskError::DimensionViolation {
                dim: 0,
                image_dim: 1,
                ..
            })
        ));
    }

    #[test]
    fn dangling_output_vertex() {
        let t = ColorlessTask::new(c(&[&["a"]]), c(&[&["x"]]), BTreeMap::from([(s(&["a"]), c(&[&["z"]]))])).unwrap();
        assert!(matches!(
            validate_task(&t, ValidationMode::Strict),
            Err(TaskError::DanglingOutputVertex { .. })
        ));
    }

    fn non_carrier() -> ColorlessTask {
        ColorlessTask::new(
            c(&[&["a", "b"]]),
            c(&[&["y"], &["z"]]),
            BTreeMap::from([
                (s(&["a"]), c(&[&["y"]])),
                (s(&["b"]), c(&[&["z"]])),
                (s(&["a", "b"]), c(&[&["z"]])),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn repair_that_empties_an_image_is_unrepairable() {
        let t = non_carrier();
        assert!(matches!(
            validate_task(&t, ValidationMode::Strict),
            Err(TaskError::CarrierViolation { .. })
        ));
        assert_eq!(
            validate_task(&t, ValidationMode::Repair),
            Err(TaskError::CarrierViolation {
                face: s(&["a"]),
                coface: s(&["a", "b"])
            })
        );
        let lenient = validate_task(&t, ValidationMode::Lenient).unwrap();
        assert!(!lenient.within_assumptions);
        assert_eq!(lenient.warnings.len(), 1);
    }

    #[test]
    fn repair_shrinks_images() {
        let t = ColorlessTask::new(
            c(&[&["a", "b"]]),
            c(&[&["y", "z"]]),
            BTreeMap::from([
                (s(&["a"]), c(&[&["y"], &["z"]])),
                (s(&["b"]), c(&[&["z"]])),
                (s(&["a", "b"]), c(&[&["z"]])),
            ]),
        )
        .unwrap();
        let r = validate_task(&t, ValidationMode::Repair).unwrap();
        assert_eq!(r.task.image(&s(&["a"])), &c(&[&["z"]]));
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn delta_must_be_total() {
        let err = ColorlessTask::new(
            c(&[&["a", "b"]]),
            c(&[&["y"]]),
            BTreeMap::from([(s(&["a"]), c(&[&["y"]]))]),
        );
        assert!(matches!(err, Err(TaskError::MissingDelta { .. })));
    }

    #[test]
    fn hexagon_local_task() {
        let hx = gen_hexagon();
        let sigma = s(&["u0", "u1"]);
        let tau = s(&["v0", "v4"]);
        let lt = local_task(&hx, &sigma, &tau).unwrap();
        assert_eq!(lt.image(&s(&["v0"])), &c(&[&["v0"]]));
        assert_eq!(lt.image(&s(&["v4"])), &c(&[&["v4"]]));
        assert_eq!(lt.image(&tau), hx.image(&sigma));
        assert!(validate_task(&lt, ValidationMode::Strict).is_ok());
    }

    #[test]
    fn singleton_local_task() {
        let hx = gen_hexagon();
        let lt = local_task(&hx, &s(&["u0", "u1"]), &s(&["v1"])).unwrap();
        assert_eq!(lt.input(), &c(&[&["v1"]]));
        assert_eq!(lt.image(&s(&["v1"])), &c(&[&["v1"]]));
    }

    #[test]
    fn set_agreement_local_task_is_whole_output() {
        let sa = gen_set_agreement(3).unwrap();
        let full = s(&["1", "2", "3"]);
        let lt = local_task(&sa, &full, &full).unwrap();
        assert_eq!(lt.image(&full), sa.output());
        assert!(validate_task(&lt, ValidationMode::Strict).is_ok());
    }

    #[test]
    fn local_task_rejects_foreign_vertices() {
        let hx = gen_hexagon();
        assert!(matches!(
            local_task(&hx, &s(&["u0"]), &s(&["v1"])),
            Err(TaskError::VertexNotInImage { .. })
        ));
    }

    #[test]
    fn effective_image_of_carrier_map_is_delta() {
        let sa = gen_set_agreement(3).unwrap();
        for sigma in sa.input().simplices() {
            assert_eq!(&sa.effective_image(&sigma, 2), sa.image(&sigma));
        }
        let t = non_carrier();
        assert!(t.effective_image(&s(&["a"]), 1).is_empty());
        assert_eq!(t.effective_image(&s(&["a"]), 0), c(&[&["y"]]));
    }
}
