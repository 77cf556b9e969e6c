//! Valency arguments: an adversarial prover that keeps a claimed algorithm
//! in bivalent configurations, the oracles it plays against, and transcript
//! checking.
//!
//! A configuration at level `t` is an edge of `Bary^t(σ₀)` for an input edge
//! `σ₀`. The prover asks the oracle for the valency of every simplex of the
//! subdivision of the current edge and moves to a child edge whose valency
//! meets two connected components of `Δ(σ₀)`.

mod oracles;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::{fixed_point, fixed_point_direct, ClosureError, ClosureOptions};
use crate::complex::{bary, decode_members, encode_set, Complex, Simplex, Vertex};
use crate::solver::SolverError;
use crate::task::ColorlessTask;

pub use oracles::{HonestOracle, StubbornOracle};

pub type Valency = BTreeSet<Vertex>;
pub type ValencyAnswer = BTreeMap<Simplex, Valency>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlpError {
    #[error("inconsistent initial valencies: {0}")]
    InconsistentValency(String),
    #[error("oracle answer violates {0}")]
    InconsistentOracle(String),
    #[error("no bivalent child of {0}")]
    NoBivalentChild(Simplex),
    #[error("witness does not solve the task: {0}")]
    WitnessInvalid(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl FlpError {
    pub fn is_resource_limit(&self) -> bool {
        match self {
            FlpError::Closure(e) => e.is_resource_limit(),
            FlpError::Solver(e) => e.is_resource_limit(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub level: usize,
    pub simplex: Simplex,
}

/// Which consistency condition an answer breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValencyViolation {
    pub diagnosis: &'static str,
    pub detail: String,
}

impl std::fmt::Display for ValencyViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.diagnosis, self.detail)
    }
}

fn violation(diagnosis: &'static str, detail: String) -> Result<(), ValencyViolation> {
    Err(ValencyViolation { diagnosis, detail })
}

fn show(v: &Valency) -> String {
    format!("{{{}}}", v.iter().map(Vertex::label).collect::<Vec<_>>().join(","))
}

/// The simplices of the subdivision of `s`, which is what the prover queries.
pub fn children(s: &Simplex) -> Vec<Simplex> {
    bary(&Complex::simplex(s)).complex().simplices().into_iter().collect()
}

/// Child edges of an edge configuration, in canonical order.
pub fn child_edges(s: &Simplex) -> Vec<Simplex> {
    bary(&Complex::simplex(s)).complex().facets().to_vec()
}

/// Checks an answer for the children of `parent` against the consistency
/// conditions: coverage, nonempty singletons at vertices, containment in
/// `V(Δ(σ₀))`, containment in and covering of the parent valency, and
/// monotonicity along faces.
pub fn validate_valency(
    parent: &Configuration,
    parent_val: &Valency,
    answer: &ValencyAnswer,
    task: &ColorlessTask,
    sigma0: &Simplex,
) -> Result<(), ValencyViolation> {
    let kids = children(&parent.simplex);
    if let Some(s) = kids.iter().find(|s| !answer.contains_key(*s)) {
        return violation("coverage", format!("no valency for {s}"));
    }
    if let Some(s) = answer.keys().find(|s| !kids.contains(s)) {
        return violation("coverage", format!("{s} is not a child of {}", parent.simplex));
    }
    for (s, v) in answer {
        if v.is_empty() {
            return violation("nonempty", format!("valency of {s} is empty"));
        }
        if s.len() == 1 && v.len() != 1 {
            return violation("singleton", format!("vertex {s} has valency {}", show(v)));
        }
    }
    let allowed = task.try_image(sigma0).ok_or_else(|| ValencyViolation {
        diagnosis: "Δ-consistency",
        detail: format!("{sigma0} is not an input simplex"),
    })?;
    for (s, v) in answer {
        if let Some(x) = v.iter().find(|x| !allowed.contains_vertex(x)) {
            return violation(
                "Δ-consistency",
                format!("{x} in the valency of {s} is not in Δ({sigma0})"),
            );
        }
    }
    let mut union = Valency::new();
    for (s, v) in answer {
        if !v.is_subset(parent_val) {
            return violation(
                "self-consistency",
                format!("valency {} of {s} exceeds parent valency {}", show(v), show(parent_val)),
            );
        }
        union.extend(v.iter().cloned());
    }
    if &union != parent_val {
        return violation(
            "self-consistency",
            format!("children cover {} of parent valency {}", show(&union), show(parent_val)),
        );
    }
    for (s, v) in answer {
        for f in s.faces().filter(|f| f != s) {
            if !answer[&f].is_subset(v) {
                return violation("monotonicity", format!("valency of {f} is not inside that of {s}"));
            }
        }
    }
    Ok(())
}

/// Indices of the components of `comps` met by `v`.
fn components_met(comps: &[Vec<Vertex>], v: &Valency) -> Vec<usize> {
    (0..comps.len())
        .filter(|&i| comps[i].iter().any(|x| v.contains(x)))
        .collect()
}

/// Checks initial valencies on the input simplices of dimension below `n`.
pub fn check_initial_valencies(task: &ColorlessTask, n: usize, vals: &ValencyAnswer) -> Result<(), FlpError> {
    let bad = |m: String| Err(FlpError::InconsistentValency(m));
    for sigma in task.delta().keys().filter(|s| s.dim() < n) {
        let Some(v) = vals.get(sigma) else {
            return bad(format!("no valency for {sigma}"));
        };
        if v.is_empty() {
            return bad(format!("valency of {sigma} is empty"));
        }
        if sigma.len() == 1 && v.len() != 1 {
            return bad(format!("vertex {sigma} has valency {}", show(v)));
        }
        let img = task.image(sigma);
        if let Some(x) = v.iter().find(|x| !img.contains_vertex(x)) {
            return bad(format!("{x} in the valency of {sigma} is not in its image"));
        }
        for f in sigma.faces().filter(|f| f != sigma) {
            if !vals.get(&f).is_some_and(|w| w.is_subset(v)) {
                return bad(format!("valency of {f} is not inside that of {sigma}"));
            }
        }
    }
    Ok(())
}

/// The starting edge of an attack and the two components its ends decide into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitOutcome {
    Attack {
        sigma0: Simplex,
        /// Components of `Δ(σ₀)` containing the decisions of the two ends of `σ₀`, in vertex order.
        components: [Vec<Vertex>; 2],
    },
    NoAttack,
}

fn find_attack(task: &ColorlessTask, n: usize, vals: &ValencyAnswer, fixed: &ColorlessTask) -> InitOutcome {
    let delta = |v: &Vertex| vals[&Simplex::vertex(v.clone())].first().unwrap().clone();
    for sigma in task.delta().keys().filter(|s| s.dim() < n && s.len() > 1) {
        let decided = Simplex::from_nonempty(sigma.iter().map(delta));
        let fixed_img = fixed.image(sigma);
        if fixed_img.contains(&decided) {
            continue;
        }
        let comp = fixed_img.component_index();
        for (x, y) in sigma
            .iter()
            .flat_map(|x| sigma.iter().filter(move |y| x < *y).map(move |y| (x, y)))
        {
            let (dx, dy) = (delta(x), delta(y));
            if comp.get(&dx) != comp.get(&dy) {
                let sigma0 = Simplex::from_nonempty([x.clone(), y.clone()]);
                let comps = task.image(&sigma0).connected_components();
                let pick = |d: &Vertex| comps.iter().find(|c| c.contains(d)).cloned().unwrap_or_default();
                return InitOutcome::Attack {
                    components: [pick(&dx), pick(&dy)],
                    sigma0,
                };
            }
        }
    }
    InitOutcome::NoAttack
}

/// Finds an input simplex whose zero-round decisions fall outside the
/// closure fixed point, and an edge of it whose ends decide into distinct
/// components.
pub fn prover_init(
    task: &ColorlessTask,
    n: usize,
    initial: &ValencyAnswer,
    opts: &ClosureOptions,
) -> Result<InitOutcome, FlpError> {
    check_initial_valencies(task, n, initial)?;
    let fp = fixed_point(task, opts)?;
    Ok(find_attack(task, n, initial, &fp.task))
}

/// Picks the first child edge (canonical order) whose valency meets two
/// components of `Δ(σ₀)`, with the two components as certificate.
pub fn prover_step(
    task: &ColorlessTask,
    sigma0: &Simplex,
    current: &Configuration,
    answer: &ValencyAnswer,
) -> Result<(Configuration, [Vec<Vertex>; 2]), FlpError> {
    let comps = task.image(sigma0).connected_components();
    for e in child_edges(&current.simplex) {
        let met = answer.get(&e).map(|v| components_met(&comps, v)).unwrap_or_default();
        if met.len() >= 2 {
            return Ok((
                Configuration {
                    level: current.level + 1,
                    simplex: e,
                },
                [comps[met[0]].clone(), comps[met[1]].clone()],
            ));
        }
    }
    Err(FlpError::NoBivalentChild(current.simplex.clone()))
}

/// What an oracle sees when asked about the children of `current`.
pub struct Query<'a> {
    pub task: &'a ColorlessTask,
    pub n: usize,
    pub sigma0: &'a Simplex,
    pub current: &'a Configuration,
    pub current_valency: &'a Valency,
    /// Valencies of the vertices of `current`.
    pub vertex_valencies: &'a BTreeMap<Vertex, Valency>,
    pub history: &'a [TranscriptStep],
}

/// A claimed algorithm, described only through the valencies it reports.
pub trait ValencyOracle {
    /// Valencies of the input simplices of dimension below `n`.
    fn initial_valencies(&mut self, task: &ColorlessTask, n: usize) -> Result<ValencyAnswer, FlpError>;

    /// Valencies of every simplex of the subdivision of `q.current`.
    fn answer(&mut self, q: &Query<'_>) -> Result<ValencyAnswer, FlpError>;
}

mod simplex_keys {
    use super::*;
    use serde::de::Error;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ValencyAnswer, s: S) -> Result<S::Ok, S::Error> {
        let out: BTreeMap<String, &Valency> = m
            .iter()
            .map(|(k, v)| (encode_set(k.iter()).label().to_string(), v))
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ValencyAnswer, D::Error> {
        let raw = BTreeMap::<String, Valency>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let members =
                    decode_members(&Vertex::new(&k)).ok_or_else(|| D::Error::custom(format!("bad key {k:?}")))?;
                Ok((Simplex::from_nonempty(members), v))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub config: Configuration,
    #[serde(with = "simplex_keys")]
    pub valencies: ValencyAnswer,
    pub chosen: Simplex,
    pub bivalence: [Vec<Vertex>; 2],
}

/// A run of the prover in which every configuration stayed bivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
    pub n: usize,
    pub sigma0: Simplex,
    pub components: [Vec<Vertex>; 2],
    #[serde(with = "simplex_keys")]
    pub initial_valencies: ValencyAnswer,
    pub steps: Vec<TranscriptStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlpOutcome {
    Transcript(Transcript),
    /// The oracle answered consistently and the prover could not continue.
    Concedes {
        reason: String,
        partial: Option<Transcript>,
    },
}

/// Plays the prover against `oracle` for `steps` rounds.
pub fn flp_from_round_reduction(
    task: &ColorlessTask,
    n: usize,
    oracle: &mut dyn ValencyOracle,
    steps: usize,
    opts: &ClosureOptions,
) -> Result<FlpOutcome, FlpError> {
    if n < 2 {
        return Err(FlpError::Unsupported(
            "a valency argument needs at least two processes".into(),
        ));
    }
    let initial = oracle.initial_valencies(task, n)?;
    let (sigma0, components) = match prover_init(task, n, &initial, opts)? {
        InitOutcome::NoAttack => {
            return Ok(FlpOutcome::Concedes {
                reason: "every input simplex decides inside the closure fixed point".into(),
                partial: None,
            })
        }
        InitOutcome::Attack { sigma0, components } => (sigma0, components),
    };
    let mut tr = Transcript {
        task: None,
        n,
        sigma0: sigma0.clone(),
        components,
        initial_valencies: initial.clone(),
        steps: Vec::new(),
    };
    let mut current = Configuration {
        level: 0,
        simplex: sigma0.clone(),
    };
    let mut current_val = initial[&sigma0].clone();
    let mut vertex_vals: BTreeMap<Vertex, Valency> = sigma0
        .iter()
        .map(|v| (v.clone(), initial[&Simplex::vertex(v.clone())].clone()))
        .collect();
    for _ in 0..steps {
        let answer = oracle.answer(&Query {
            task,
            n,
            sigma0: &sigma0,
            current: &current,
            current_valency: &current_val,
            vertex_valencies: &vertex_vals,
            history: &tr.steps,
        })?;
        validate_valency(&current, &current_val, &answer, task, &sigma0)
            .map_err(|v| FlpError::InconsistentOracle(v.to_string()))?;
        let (next, bivalence) = match prover_step(task, &sigma0, &current, &answer) {
            Ok(x) => x,
            Err(FlpError::NoBivalentChild(s)) => {
                return Ok(FlpOutcome::Concedes {
                    reason: format!("every child of {s} at level {} is univalent", current.level + 1),
                    partial: Some(tr),
                })
            }
            Err(e) => return Err(e),
        };
        current_val = answer[&next.simplex].clone();
        vertex_vals = next
            .simplex
            .iter()
            .map(|v| (v.clone(), answer[&Simplex::vertex(v.clone())].clone()))
            .collect();
        tr.steps.push(TranscriptStep {
            config: current,
            valencies: answer,
            chosen: next.simplex.clone(),
            bivalence,
        });
        current = next;
    }
    Ok(FlpOutcome::Transcript(tr))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranscriptCheck {
    pub valid: bool,
    pub diagnosis: Option<String>,
}

fn reject(d: impl Into<String>) -> TranscriptCheck {
    TranscriptCheck {
        valid: false,
        diagnosis: Some(d.into()),
    }
}

/// Rechecks the choice of `σ₀`, every answer, every containment between
/// consecutive configurations and every bivalence certificate.
pub fn verify_transcript(task: &ColorlessTask, n: usize, tr: &Transcript, opts: &ClosureOptions) -> TranscriptCheck {
    if tr.n != n {
        return reject(format!("transcript is for {} processes, not {n}", tr.n));
    }
    if let Err(e) = check_initial_valencies(task, n, &tr.initial_valencies) {
        return reject(format!("σ0 construction: {e}"));
    }
    let fixed = if task.is_carrier_map() {
        fixed_point_direct(task)
    } else {
        match fixed_point(task, opts) {
            Ok(fp) => fp.task,
            Err(e) => return reject(format!("σ0 construction: {e}")),
        }
    };
    match find_attack(task, n, &tr.initial_valencies, &fixed) {
        InitOutcome::Attack { sigma0, components } if sigma0 == tr.sigma0 && components == tr.components => {}
        _ => return reject("σ0 construction: σ0 or its components do not follow from the initial valencies"),
    }
    let comps = task.image(&tr.sigma0).connected_components();
    let mut parent_val = tr.initial_valencies[&tr.sigma0].clone();
    for (i, st) in tr.steps.iter().enumerate() {
        let expected = if i == 0 { &tr.sigma0 } else { &tr.steps[i - 1].chosen };
        if st.config.level != i || &st.config.simplex != expected {
            return reject(format!(
                "containment: step {i} is not the configuration chosen before it"
            ));
        }
        if !child_edges(&st.config.simplex).contains(&st.chosen) {
            return reject(format!(
                "containment: step {i} chooses {} outside the subdivision",
                st.chosen
            ));
        }
        if let Err(v) = validate_valency(&st.config, &parent_val, &st.valencies, task, &tr.sigma0) {
            return reject(format!("{} at step {i}: {}", v.diagnosis, v.detail));
        }
        let chosen_val = &st.valencies[&st.chosen];
        let [a, b] = &st.bivalence;
        let meets = |c: &Vec<Vertex>| comps.contains(c) && c.iter().any(|x| chosen_val.contains(x));
        if a == b || !meets(a) || !meets(b) {
            return reject(format!("bivalence: certificate at step {i} does not hold"));
        }
        parent_val = chosen_val.clone();
    }
    TranscriptCheck {
        valid: true,
        diagnosis: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::{gen_epsilon_agreement, gen_hexagon, gen_set_agreement};
    use proptest::prelude::*;

    fn s(v: &[&str]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn val(v: &[&str]) -> Valency {
        v.iter().map(|x| Vertex::new(*x)).collect()
    }

    fn opts() -> ClosureOptions {
        ClosureOptions::default()
    }

    fn hexagon_level_one() -> (ColorlessTask, Configuration, Valency, ValencyAnswer) {
        let hx = gen_hexagon();
        let cfg = Configuration {
            level: 0,
            simplex: s(&["u0", "u2"]),
        };
        let answer = BTreeMap::from([
            (s(&["{u0}"]), val(&["v0"])),
            (s(&["{u0,u2}"]), val(&["v0"])),
            (s(&["{u2}"]), val(&["v2"])),
            (s(&["{u0}", "{u0,u2}"]), val(&["v0"])),
            (s(&["{u0,u2}", "{u2}"]), val(&["v0", "v2"])),
        ]);
        (hx, cfg, val(&["v0", "v2"]), answer)
    }

    #[test]
    fn consistent_hexagon_answer() {
        let (hx, cfg, pv, answer) = hexagon_level_one();
        assert_eq!(validate_valency(&cfg, &pv, &answer, &hx, &cfg.simplex), Ok(()));
        let (next, cert) = prover_step(&hx, &cfg.simplex, &cfg, &answer).unwrap();
        assert_eq!(next.simplex, s(&["{u0,u2}", "{u2}"]));
        assert_eq!(next.level, 1);
        assert_eq!(
            cert,
            [
                vec![Vertex::new("v0"), Vertex::new("v5")],
                vec![Vertex::new("v2"), Vertex::new("v3")]
            ]
        );
    }

    #[test]
    fn each_condition_is_diagnosed() {
        let (hx, cfg, pv, answer) = hexagon_level_one();
        let check =
            |a: &ValencyAnswer, p: &Valency| validate_valency(&cfg, p, a, &hx, &cfg.simplex).unwrap_err().diagnosis;

        let mut mono = answer.clone();
        mono.insert(s(&["{u0,u2}", "{u2}"]), val(&["v0"]));
        mono.insert(s(&["{u0}", "{u0,u2}"]), val(&["v0", "v2"]));
        assert_eq!(check(&mono, &pv), "monotonicity");

        let mut short = answer.clone();
        for v in short.values_mut() {
            v.remove(&Vertex::new("v2"));
            if v.is_empty() {
                v.insert(Vertex::new("v0"));
            }
        }
        assert_eq!(check(&short, &pv), "self-consistency");

        let mut wide = answer.clone();
        wide.get_mut(&s(&["{u0,u2}", "{u2}"]))
            .unwrap()
            .insert(Vertex::new("v1"));
        assert_eq!(check(&wide, &pv), "Δ-consistency");

        let mut fat = answer.clone();
        fat.insert(s(&["{u2}"]), val(&["v2", "v3"]));
        assert_eq!(check(&fat, &pv), "singleton");

        let mut missing = answer;
        missing.remove(&s(&["{u2}"]));
        assert_eq!(check(&missing, &pv), "coverage");
    }

    #[test]
    fn hexagon_attack_starts_on_u0_u2() {
        let hx = gen_hexagon();
        let init = StubbornOracle.initial_valencies(&hx, 2).unwrap();
        match prover_init(&hx, 2, &init, &opts()).unwrap() {
            InitOutcome::Attack { sigma0, .. } => assert_eq!(sigma0, s(&["u0", "u2"])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn no_attack_when_decisions_fit_the_fixed_point() {
        let sa = gen_set_agreement(3).unwrap();
        let ident: ValencyAnswer = sa
            .input()
            .simplices()
            .into_iter()
            .map(|x| (x.clone(), x.iter().cloned().collect()))
            .collect();
        assert_eq!(prover_init(&sa, 3, &ident, &opts()).unwrap(), InitOutcome::NoAttack);

        let e = gen_epsilon_agreement(1).unwrap();
        let ident = BTreeMap::from([
            (s(&["0"]), val(&["0"])),
            (s(&["1"]), val(&["1"])),
            (s(&["0", "1"]), val(&["0", "1"])),
        ]);
        assert_eq!(prover_init(&e, 2, &ident, &opts()).unwrap(), InitOutcome::NoAttack);
    }

    #[test]
    fn inconsistent_initial_valencies_are_rejected() {
        let e = gen_epsilon_agreement(1).unwrap();
        let bad = BTreeMap::from([
            (s(&["0"]), val(&["1"])),
            (s(&["1"]), val(&["1"])),
            (s(&["0", "1"]), val(&["0", "1"])),
        ]);
        assert!(matches!(
            prover_init(&e, 2, &bad, &opts()),
            Err(FlpError::InconsistentValency(_))
        ));
    }

    #[test]
    fn stubborn_run_on_hexagon() {
        let hx = gen_hexagon();
        let out = flp_from_round_reduction(&hx, 2, &mut StubbornOracle, 20, &opts()).unwrap();
        let FlpOutcome::Transcript(tr) = out else {
            panic!("prover conceded")
        };
        assert_eq!(tr.steps.len(), 20);
        assert_eq!(verify_transcript(&hx, 2, &tr, &opts()).diagnosis, None);
        let halves = [val(&["v2", "v3"]), val(&["v5", "v0"])];
        for st in &tr.steps {
            let v = &st.valencies[&st.chosen];
            assert!(v.iter().all(|x| halves[0].contains(x) || halves[1].contains(x)));
            assert!(halves.iter().all(|h| !h.is_disjoint(v)));
        }
    }

    #[test]
    fn tampered_transcripts_fail() {
        let hx = gen_hexagon();
        let FlpOutcome::Transcript(tr) = flp_from_round_reduction(&hx, 2, &mut StubbornOracle, 4, &opts()).unwrap()
        else {
            panic!()
        };
        let mut wide = tr.clone();
        let c = wide.steps[1].chosen.clone();
        wide.steps[1].valencies.get_mut(&c).unwrap().insert(Vertex::new("v1"));
        assert!(verify_transcript(&hx, 2, &wide, &opts())
            .diagnosis
            .unwrap()
            .starts_with("Δ-consistency"));

        let mut jump = tr.clone();
        jump.steps.remove(1);
        assert!(verify_transcript(&hx, 2, &jump, &opts())
            .diagnosis
            .unwrap()
            .starts_with("containment"));

        let mut relevel = tr.clone();
        relevel.steps[2].config.level = 4;
        assert!(verify_transcript(&hx, 2, &relevel, &opts())
            .diagnosis
            .unwrap()
            .starts_with("containment"));

        let mut cert = tr.clone();
        cert.steps[0].bivalence[1] = cert.steps[0].bivalence[0].clone();
        assert!(verify_transcript(&hx, 2, &cert, &opts())
            .diagnosis
            .unwrap()
            .starts_with("bivalence"));

        let mut start = tr;
        start.sigma0 = s(&["u0", "u1"]);
        assert!(verify_transcript(&hx, 2, &start, &opts())
            .diagnosis
            .unwrap()
            .starts_with("σ0"));
    }

    #[test]
    fn transcript_json_round_trip() {
        let hx = gen_hexagon();
        let FlpOutcome::Transcript(tr) = flp_from_round_reduction(&hx, 2, &mut StubbornOracle, 3, &opts()).unwrap()
        else {
            panic!()
        };
        let text = serde_json::to_string(&tr).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["sigma0"], serde_json::json!(["u0", "u2"]));
        assert_eq!(v["steps"][0]["config"]["level"], 0);
        assert!(v["steps"][0]["valencies"]["{{u0,u2},{u2}}"].is_array());
        let back: Transcript = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tr);
    }

    /// Random answers satisfying the consistency conditions for a bivalent
    /// parent edge with valency `{p, q}` (or larger).
    fn consistent_answer() -> impl Strategy<Value = (Valency, ValencyAnswer)> {
        let labels = ["v0", "v2", "v3", "v5"];
        (
            prop::sample::subsequence(labels.to_vec(), 2..=4),
            prop::collection::vec(0usize..4, 3),
            prop::collection::vec(prop::collection::vec(any::<bool>(), 4), 2),
        )
            .prop_filter_map("valency must meet both halves", |(parent, picks, extra)| {
                let parent: Valency = parent.into_iter().map(Vertex::new).collect();
                let halves = [val(&["v2", "v3"]), val(&["v5", "v0"])];
                if halves.iter().any(|h| h.is_disjoint(&parent)) {
                    return None;
                }
                let p: Vec<Vertex> = parent.iter().cloned().collect();
                let vs: Vec<Valency> = picks.iter().map(|&i| Valency::from([p[i % p.len()].clone()])).collect();
                let mut edges: Vec<Valency> = (0..2)
                    .map(|e| {
                        let mut v: Valency = vs[e].union(&vs[e + 1]).cloned().collect();
                        v.extend(p.iter().zip(&extra[e]).filter(|(_, b)| **b).map(|(x, _)| x.clone()));
                        v
                    })
                    .collect();
                let covered: Valency = edges.iter().flatten().cloned().collect();
                edges[1].extend(parent.difference(&covered).cloned());
                let kids = child_edges(&s(&["u0", "u2"]));
                let m = BTreeMap::from([
                    (s(&["{u0}"]), vs[0].clone()),
                    (s(&["{u0,u2}"]), vs[1].clone()),
                    (s(&["{u2}"]), vs[2].clone()),
                    (kids[0].clone(), edges[0].clone()),
                    (kids[1].clone(), edges[1].clone()),
                ]);
                Some((parent, m))
            })
    }

    proptest! {
        #[test]
        fn consistent_answers_always_leave_a_bivalent_child((pv, answer) in consistent_answer()) {
            let hx = gen_hexagon();
            let cfg = Configuration { level: 0, simplex: s(&["u0", "u2"]) };
            prop_assume!(validate_valency(&cfg, &pv, &answer, &hx, &cfg.simplex).is_ok());
            prop_assert!(prover_step(&hx, &cfg.simplex, &cfg, &answer).is_ok());
        }
    }
}
