//! Job configuration: a JSON document naming an age, a level bound, the
//! tasks to run and the outputs to emit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use orbit_lie::age::{Param, UnionRule};
use orbit_lie::measure::Specialization;
use orbit_lie::structure::StructureLiteral;
use orbit_lie::{Age, AgeSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Schema { path: String, message: String, line: usize, column: usize },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid { path: path.to_string(), message: message.to_string() }
}

/// Age literal, externally tagged: `{"times_q": {"finite_model": {...}}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AgeLiteral {
    Sets {
        #[serde(default = "symbolic")]
        lambda: String,
    },
    LinearOrders {},
    FiniteModel(StructureLiteral),
    DisjointUnion(Vec<AgeLiteral>),
    /// Disjoint union with the additive measure rule.
    DisjointUnionSum(Vec<AgeLiteral>),
    TimesQ(Box<AgeLiteral>),
    MultisetOver(Box<AgeLiteral>),
    Colored { age: Box<AgeLiteral>, m: usize },
}

fn symbolic() -> String {
    "symbolic".into()
}

impl AgeLiteral {
    pub fn to_spec(&self, path: &str) -> Result<AgeSpec, ConfigError> {
        let children = |parts: &[AgeLiteral], key: &str| {
            parts
                .iter()
                .enumerate()
                .map(|(i, p)| p.to_spec(&format!("{path}.{key}[{i}]")))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(match self {
            AgeLiteral::Sets { lambda } => {
                AgeSpec::sets(Param::from_str(lambda).map_err(|e| invalid(&format!("{path}.sets.lambda"), e))?)
            }
            AgeLiteral::LinearOrders {} => AgeSpec::LinearOrders,
            AgeLiteral::FiniteModel(lit) => AgeSpec::FiniteModel(
                lit.to_structure().map_err(|e| invalid(&format!("{path}.finite_model"), e))?,
            ),
            AgeLiteral::DisjointUnion(parts) => {
                AgeSpec::DisjointUnion { components: children(parts, "disjoint_union")?, rule: UnionRule::Product }
            }
            AgeLiteral::DisjointUnionSum(parts) => {
                AgeSpec::DisjointUnion { components: children(parts, "disjoint_union_sum")?, rule: UnionRule::Sum }
            }
            AgeLiteral::TimesQ(inner) => AgeSpec::times_q(inner.to_spec(&format!("{path}.times_q"))?),
            AgeLiteral::MultisetOver(inner) => AgeSpec::multiset_over(inner.to_spec(&format!("{path}.multiset_over"))?),
            AgeLiteral::Colored { age, m } => {
                if *m == 0 {
                    return Err(invalid(&format!("{path}.colored.m"), "needs at least one colour"));
                }
                AgeSpec::colored(age.to_spec(&format!("{path}.colored.age"))?, *m)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Emit {
    Json,
    Table,
    Dot,
}

impl FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "json" => Ok(Emit::Json),
            "table" => Ok(Emit::Table),
            "dot" => Ok(Emit::Dot),
            other => Err(format!("unknown output `{other}`; expected json, table or dot")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlrParams {
    pub r: usize,
    /// Total degree of the checked pieces; defaults to `N`.
    #[serde(default)]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Enumerate,
    MeasureCheck,
    Sl2Check,
    GlrCheck(GlrParams),
    Verma,
    Diagnostics,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Enumerate => "enumerate",
            Task::MeasureCheck => "measure-check",
            Task::Sl2Check => "sl2-check",
            Task::GlrCheck(_) => "glr-check",
            Task::Verma => "verma",
            Task::Diagnostics => "diagnostics",
        }
    }

    /// Position in the fixed execution order.
    pub fn stage(&self) -> usize {
        match self {
            Task::Enumerate => 0,
            Task::MeasureCheck => 1,
            Task::Sl2Check => 2,
            Task::GlrCheck(_) => 3,
            Task::Verma => 4,
            Task::Diagnostics => 5,
        }
    }

    fn needs_measure(&self) -> bool {
        matches!(self, Task::MeasureCheck | Task::Sl2Check | Task::GlrCheck(_))
    }
}

/// The document as written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub age: AgeLiteral,
    #[serde(rename = "N")]
    pub n: usize,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub emit: Vec<Emit>,
    /// Values for named measure parameters, as rational literals.
    #[serde(default)]
    pub specialize: BTreeMap<String, String>,
    /// Largest number of classes allowed on a single level.
    #[serde(default)]
    pub max_level_size: Option<usize>,
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub raw: RawConfig,
    pub spec: AgeSpec,
    pub level: usize,
    pub tasks: Vec<Task>,
    pub emit: Vec<Emit>,
    pub specialization: Specialization,
}

pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    text.trim().parse::<BigRational>().map_err(|_| format!("`{text}` is not a rational number"))
}

/// Parses and validates a job document.
pub fn parse_config(text: &str) -> Result<JobConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ConfigError::Schema { path, message: inner.to_string(), line: inner.line(), column: inner.column() }
    })?;
    JobConfig::from_raw(raw)
}

impl JobConfig {
    pub fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        let spec = raw.age.to_spec("age")?;
        Age::new(spec.clone()).map_err(|e| invalid("age", e))?;

        let mut specialization = Specialization::new();
        let names: Vec<String> = spec
            .params()
            .into_iter()
            .filter_map(|p| match p {
                Param::Symbol(s) => Some(s.clone()),
                Param::Value(_) => None,
            })
            .collect();
        for (name, value) in &raw.specialize {
            let path = format!("specialize.{name}");
            if !names.contains(name) {
                return Err(invalid(&path, "no measure parameter of that name"));
            }
            specialization.insert(name.clone(), parse_rational(value).map_err(|e| invalid(&path, e))?);
        }

        let mut tasks = Vec::new();
        for (i, task) in raw.tasks.iter().enumerate() {
            let path = format!("tasks[{i}]");
            if task.needs_measure() && !spec.has_measure() {
                return Err(invalid(&path, format!("{} needs a measure, and this age is counting-only", task.name())));
            }
            if let Task::GlrCheck(p) = task {
                if p.r < 2 {
                    return Err(invalid(&path, format!("glr-check needs r >= 2, got {}", p.r)));
                }
            }
            if tasks.iter().any(|t: &Task| t.name() == task.name()) {
                return Err(invalid(&path, format!("{} listed twice", task.name())));
            }
            tasks.push(*task);
        }
        tasks.sort_by_key(Task::stage);

        let mut emit = raw.emit.clone();
        emit.sort();
        emit.dedup();
        let job = JobConfig { level: raw.n, raw, spec, tasks, emit, specialization };
        job.check_parameters()?;
        Ok(job)
    }

    pub fn set_level(&mut self, n: usize) {
        self.level = n;
    }

    pub fn set_emit(&mut self, emit: Vec<Emit>) {
        self.emit = emit;
        self.emit.sort();
        self.emit.dedup();
    }

    /// Adds or overrides a parameter value, as given on the command line.
    pub fn specialize(&mut self, name: &str, value: BigRational) -> Result<(), ConfigError> {
        let known = self.spec.params().iter().any(|p| matches!(p, Param::Symbol(s) if s == name));
        if !known {
            return Err(invalid(&format!("--specialize {name}"), "no measure parameter of that name"));
        }
        self.specialization.insert(name.to_string(), value);
        self.check_parameters()
    }

    /// At most one parameter may stay free when a task needs the measure.
    fn check_parameters(&self) -> Result<(), ConfigError> {
        if !self.tasks.iter().any(Task::needs_measure) {
            return Ok(());
        }
        let mut free: Vec<&str> = Vec::new();
        for p in self.spec.params() {
            if let Param::Symbol(s) = p {
                if !self.specialization.contains_key(s) && !free.contains(&s.as_str()) {
                    free.push(s);
                }
            }
        }
        if free.len() > 1 {
            return Err(invalid("specialize", format!("parameters {} are all free; give values to all but one", free.join(", "))));
        }
        Ok(())
    }
}
