use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Simplex, Vertex};

use super::{ColorlessTask, TaskError};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaEntry {
    simplex: Simplex,
    image_facets: Vec<Vec<Vertex>>,
}

/// Interchange form of a task.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskJson {
    input: Complex,
    output: Complex,
    delta: Vec<DeltaEntry>,
}

impl From<&ColorlessTask> for TaskJson {
    fn from(t: &ColorlessTask) -> Self {
        TaskJson {
            input: t.input.clone(),
            output: t.output.clone(),
            delta: t
                .delta
                .iter()
                .map(|(s, c)| DeltaEntry {
                    simplex: s.clone(),
                    image_facets: c.facets().iter().map(|f| f.vertices().to_vec()).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<TaskJson> for ColorlessTask {
    type Error = TaskError;

    fn try_from(raw: TaskJson) -> Result<Self, TaskError> {
        let labels = raw.input.vertices().iter().chain(raw.output.vertices()).chain(
            raw.delta
                .iter()
                .flat_map(|e| e.simplex.iter().chain(e.image_facets.iter().flatten())),
        );
        for v in labels {
            let l = v.label();
            if l.is_empty() || l.contains(['{', '}', ',']) {
                return Err(TaskError::ReservedLabel { label: l.to_string() });
            }
        }
        let mut delta = BTreeMap::new();
        for e in raw.delta {
            if delta.contains_key(&e.simplex) {
                return Err(TaskError::DuplicateDelta { simplex: e.simplex });
            }
            let img = Complex::build(e.image_facets)?;
            delta.insert(e.simplex, img);
        }
        ColorlessTask::new(raw.input, raw.output, delta)
    }
}

/// Parses a task; syntax and schema errors carry line and column.
pub fn parse_task_json(text: &str) -> Result<ColorlessTask, TaskError> {
    let raw: TaskJson = serde_json::from_str(text).map_err(|e| TaskError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    ColorlessTask::try_from(raw)
}

pub fn task_to_json(t: &ColorlessTask) -> String {
    serde_json::to_string_pretty(&TaskJson::from(t)).expect("task serializes")
}

impl Serialize for ColorlessTask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TaskJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColorlessTask {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = TaskJson::deserialize(d)?;
        ColorlessTask::try_from(raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::{gen_hexagon, TaskId};

    #[test]
    fn round_trip_is_byte_stable() {
        for id in TaskId::corpus() {
            let t = id.build().unwrap();
            let text = task_to_json(&t);
            let back = parse_task_json(&text).unwrap();
            assert_eq!(back, t);
            assert_eq!(task_to_json(&back), text);
        }
    }

    #[test]
    fn hexagon_json_shape() {
        let v: serde_json::Value = serde_json::from_str(&task_to_json(&gen_hexagon())).unwrap();
        assert_eq!(v["delta"].as_array().unwrap().len(), 6);
        assert_eq!(v["delta"][0]["simplex"], serde_json::json!(["u0"]));
        assert_eq!(v["delta"][0]["image_facets"], serde_json::json!([["v0"], ["v3"]]));
        assert_eq!(v["delta"][1]["simplex"], serde_json::json!(["u0", "u1"]));
    }

    #[test]
    fn errors_locate_the_problem() {
        let bad = "{\n  \"input\": {\"facets\": [[\"a\"]]},\n  \"output\": 3\n}";
        match parse_task_json(bad) {
            Err(TaskError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let dup = r#"{"input":{"facets":[["a"]]},"output":{"facets":[["x"]]},
            "delta":[{"simplex":["a"],"image_facets":[["x"]]},{"simplex":["a"],"image_facets":[["x"]]}]}"#;
        assert!(matches!(parse_task_json(dup), Err(TaskError::DuplicateDelta { .. })));
        let missing = r#"{"input":{"facets":[["a","b"]]},"output":{"facets":[["x"]]},
            "delta":[{"simplex":["a"],"image_facets":[["x"]]}]}"#;
        assert!(matches!(parse_task_json(missing), Err(TaskError::MissingDelta { .. })));
    }

    #[test]
    fn reserved_characters_are_rejected() {
        let braces = r#"{"input":{"facets":[["{a}"]]},"output":{"facets":[["x"]]},
            "delta":[{"simplex":["{a}"],"image_facets":[["x"]]}]}"#;
        assert!(matches!(parse_task_json(braces), Err(TaskError::ReservedLabel { .. })));
        let comma = r#"{"input":{"facets":[["a"]]},"output":{"facets":[["x,y"]]},
            "delta":[{"simplex":["a"],"image_facets":[["x,y"]]}]}"#;
        assert!(matches!(parse_task_json(comma), Err(TaskError::ReservedLabel { .. })));
    }
}
