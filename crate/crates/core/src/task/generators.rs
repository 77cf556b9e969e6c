use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::complex::{Complex, Simplex};
use crate::covering::{covering_task, gen_cyclic_cover};

use super::{ColorlessTask, TaskError};

/// k-set agreement on inputs `1..=k`: outputs are input values of the
/// participants, and not all `k` of them at once.
pub fn gen_set_agreement(k: usize) -> Result<ColorlessTask, TaskError> {
    if k < 2 {
        return Err(TaskError::InvalidParameter(format!(
            "set agreement needs k >= 2, got {k}"
        )));
    }
    let input = Complex::full((1..=k).map(|i| i.to_string()))?;
    let output = input.skeleton(k - 2);
    let delta = input
        .simplices()
        .into_iter()
        .map(|s| {
            let img = if s.len() < k {
                Complex::simplex(&s)
            } else {
                output.clone()
            };
            (s, img)
        })
        .collect();
    ColorlessTask::new(input, output, delta)
}

/// The hexagon task: the 6-cycle viewed as a double cover of the 3-cycle.
pub fn gen_hexagon() -> ColorlessTask {
    let u = |i: usize| format!("u{}", i % 3);
    let v = |i: usize| format!("v{}", i % 6);
    let input = Complex::build((0..3).map(|i| [u(i), u(i + 1)])).unwrap();
    let output = Complex::build((0..6).map(|i| [v(i), v(i + 1)])).unwrap();
    let mut delta = BTreeMap::new();
    for i in 0..3 {
        delta.insert(Simplex::vertex(u(i)), Complex::build([[v(i)], [v(i + 3)]]).unwrap());
        delta.insert(
            Simplex::from_nonempty([u(i), u(i + 1)]),
            Complex::build([[v(i), v(i + 1)], [v(i + 3), v(i + 4)]]).unwrap(),
        );
    }
    ColorlessTask::new(input, output, delta).unwrap()
}

/// Approximate agreement on `{0, 1}` with precision `1/N`. Output vertices are
/// the numerators `0..=N` of the grid points, joined into a path.
pub fn gen_epsilon_agreement(n: usize) -> Result<ColorlessTask, TaskError> {
    if n < 1 {
        return Err(TaskError::InvalidParameter("epsilon agreement needs N >= 1".into()));
    }
    let input = Complex::full(["0", "1"])?;
    let output = Complex::build((0..n).map(|i| [i.to_string(), (i + 1).to_string()]))?;
    let delta = BTreeMap::from([
        (Simplex::vertex("0"), Complex::full(["0"])?),
        (Simplex::vertex("1"), Complex::full([n.to_string()])?),
        (Simplex::from_nonempty(["0", "1"]), output.clone()),
    ]);
    ColorlessTask::new(input, output, delta)
}

/// Name and integer parameters of a built-in task, e.g. `builtin:sa:k=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskId {
    pub name: String,
    pub params: BTreeMap<String, usize>,
}

impl TaskId {
    fn param(&self, key: &str) -> Result<usize, TaskError> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| TaskError::InvalidParameter(format!("{self} needs parameter {key}")))
    }

    fn expect_params(&self, keys: &[&str]) -> Result<(), TaskError> {
        match self.params.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(TaskError::InvalidParameter(format!("{self}: unexpected parameter {k}"))),
            None => Ok(()),
        }
    }

    pub fn build(&self) -> Result<ColorlessTask, TaskError> {
        match self.name.as_str() {
            "hexagon" => {
                self.expect_params(&[])?;
                Ok(gen_hexagon())
            }
            "sa" => {
                self.expect_params(&["k"])?;
                gen_set_agreement(self.param("k")?)
            }
            "eps" => {
                self.expect_params(&["N"])?;
                gen_epsilon_agreement(self.param("N")?)
            }
            "cover" => {
                self.expect_params(&["m", "k"])?;
                let c = gen_cyclic_cover(self.param("m")?, self.param("k")?)
                    .map_err(|e| TaskError::InvalidParameter(e.to_string()))?;
                covering_task(&c).map_err(|e| TaskError::InvalidParameter(e.to_string()))
            }
            _ => Err(TaskError::UnknownTask(self.to_string())),
        }
    }

    /// Every built-in family at the parameters used in the test corpus.
    pub fn corpus() -> Vec<TaskId> {
        [
            "builtin:hexagon",
            "builtin:sa:k=2",
            "builtin:sa:k=3",
            "builtin:eps:N=1",
            "builtin:eps:N=2",
            "builtin:eps:N=4",
            "builtin:eps:N=8",
            "builtin:cover:m=3,k=1",
            "builtin:cover:m=3,k=2",
            "builtin:cover:m=3,k=3",
            "builtin:cover:m=4,k=2",
            "builtin:cover:m=5,k=2",
        ]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
    }
}

impl FromStr for TaskId {
    type Err = TaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rest = s
            .strip_prefix("builtin:")
            .ok_or_else(|| TaskError::UnknownTask(s.to_string()))?;
        let (name, params) = rest.split_once(':').unwrap_or((rest, ""));
        let mut map = BTreeMap::new();
        for kv in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| TaskError::InvalidParameter(format!("expected key=value, got {kv:?}")))?;
            let v: usize = v
                .parse()
                .map_err(|_| TaskError::InvalidParameter(format!("{k} must be a nonnegative integer")))?;
            map.insert(k.to_string(), v);
        }
        Ok(TaskId {
            name: name.to_string(),
            params: map,
        })
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "builtin:{}", self.name)?;
        let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if !p.is_empty() {
            write!(f, ":{}", p.join(","))?;
        }
        Ok(())
    }
}
