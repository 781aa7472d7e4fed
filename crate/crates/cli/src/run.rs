//! Executes a job: shared enumeration and matrices, then each task in the
//! fixed stage order. A failing task never stops the ones after it.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use orbit_lie::age::{AgeError, Levels};
use orbit_lie::lie::{emit_dot, ActionTruncation, GlAction, Operator};
use orbit_lie::measure::MeasureReport;
use orbit_lie::structure::StructureLiteral;
use orbit_lie::verma::{
    character_identity_holds, finite_case_decomposition, kernel_cross_check, product_multiplicities,
    sequence_diagnostics, verma_multiplicities, FiniteCase, KernelStatus,
};
use orbit_lie::{Age, AgeSpec, FiniteStructure, IsoClassId, Measure, Scalar};
use serde_json::{json, Value};

use crate::config::{GlrParams, JobConfig, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone)]
pub struct TaskReport {
    pub task: &'static str,
    pub status: Status,
    pub payload: Value,
    /// One line for the table.
    pub summary: String,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct JobReport {
    pub job: JobConfig,
    /// Name of the parameter left symbolic, if any.
    pub symbol: Option<String>,
    pub tasks: Vec<TaskReport>,
    /// Shared work not owned by one task, for the table.
    pub stages: Vec<(&'static str, Duration)>,
    /// DOT renderings of `e` and `f`, when requested and available.
    pub dot: Option<(String, String)>,
    pub notes: Vec<String>,
}

impl JobReport {
    pub fn failed(&self) -> bool {
        self.tasks.iter().any(|t| t.status == Status::Fail)
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

struct Context {
    age: Arc<Age>,
    level: usize,
    measure: Result<Measure, String>,
    /// Levels `0..=N + 1`, or the error that stopped enumeration.
    levels: Result<Levels, String>,
    partial: Option<Levels>,
    action: Option<Result<ActionTruncation, String>>,
    labels: HashMap<IsoClassId, String>,
}

impl Context {
    fn counts(&self) -> Option<Vec<u64>> {
        let levels = self.levels.as_ref().ok()?;
        Some(levels.counts().into_iter().take(self.level + 1).map(|c| c as u64).collect())
    }

    fn label(&self, id: &IsoClassId) -> String {
        self.labels.get(id).cloned().unwrap_or_else(|| id.to_hex())
    }

    fn structure(&self, s: &FiniteStructure) -> Value {
        json!({ "descriptor": self.age.describe(s), "literal": StructureLiteral::from(s) })
    }
}

fn failure(task: &'static str, message: impl ToString) -> TaskReport {
    let message = message.to_string();
    TaskReport { task, status: Status::Fail, payload: json!({ "error": message }), summary: message, wall: Duration::ZERO }
}

pub fn run(job: &JobConfig) -> JobReport {
    let age = Arc::new(Age::new(job.spec.clone()).expect("validated"));
    let measure = if job.spec.has_measure() {
        Measure::new(age.clone(), &job.specialization).map_err(|e| e.to_string())
    } else {
        Err("the age is counting-only and carries no measure".to_string())
    };
    let symbol = measure.as_ref().ok().and_then(|m| m.symbol().map(str::to_string));
    let mut report = JobReport {
        job: job.clone(),
        symbol,
        tasks: Vec::new(),
        stages: Vec::new(),
        dot: None,
        notes: Vec::new(),
    };

    let (enumerated, wall) = timed(|| age.enumerate_levels(job.level + 1, job.raw.max_level_size));
    report.stages.push(("enumeration", wall));
    let (levels, partial) = match enumerated {
        Ok(l) => (Ok(l), None),
        Err(AgeError::CapExceeded { level, size, cap, partial }) => {
            (Err(format!("level {level} has at least {size} classes, over the cap of {cap}")), Some(*partial))
        }
        Err(e) => (Err(e.to_string()), None),
    };
    let labels = levels
        .as_ref()
        .ok()
        .or(partial.as_ref())
        .map(|l| l.iter().flatten().map(|c| (c.id.clone(), age.describe(&c.rep))).collect())
        .unwrap_or_default();
    let mut cx = Context { age, level: job.level, measure, levels, partial, action: None, labels };

    let wants_dot = job.emit.contains(&crate::config::Emit::Dot);
    let needs_action = wants_dot || job.tasks.iter().any(|t| matches!(t, Task::Sl2Check | Task::Verma));
    if needs_action {
        if let (Ok(m), Ok(levels)) = (&cx.measure, &cx.levels) {
            let (built, wall) = timed(|| ActionTruncation::from_levels(m, levels.clone(), job.level));
            report.stages.push(("matrices", wall));
            cx.action = Some(built.map_err(|e| e.to_string()));
        }
    }

    for task in &job.tasks {
        let (mut tr, wall) = timed(|| match task {
            Task::Enumerate => enumerate(&cx),
            Task::MeasureCheck => measure_check(&cx),
            Task::Sl2Check => sl2_check(&cx),
            Task::GlrCheck(p) => glr_check(&cx, *p),
            Task::Verma => verma(&cx),
            Task::Diagnostics => diagnostics(&cx),
        });
        tr.wall = wall;
        report.tasks.push(tr);
    }

    if wants_dot {
        match &cx.action {
            Some(Ok(action)) => report.dot = Some((emit_dot(action, Operator::E), emit_dot(action, Operator::F))),
            Some(Err(e)) => report.notes.push(format!("no diagrams: {e}")),
            None => report.notes.push(format!(
                "no diagrams: {}",
                cx.measure.as_ref().err().or(cx.levels.as_ref().err()).cloned().unwrap_or_default()
            )),
        }
    }
    report
}

fn enumerate(cx: &Context) -> TaskReport {
    let render = |levels: &Levels, upto: usize| -> Value {
        levels
            .iter()
            .take(upto + 1)
            .enumerate()
            .map(|(n, classes)| {
                let classes: Vec<Value> = classes
                    .iter()
                    .map(|c| json!({ "id": c.id.to_hex(), "descriptor": cx.age.describe(&c.rep) }))
                    .collect();
                json!({ "level": n, "classes": classes })
            })
            .collect()
    };
    match &cx.levels {
        Ok(levels) => {
            let counts = cx.counts().expect("enumerated");
            TaskReport {
                task: "enumerate",
                status: Status::Pass,
                summary: format!("a = {}", join(&counts)),
                payload: json!({ "counts": counts, "levels": render(levels, cx.level) }),
                wall: Duration::ZERO,
            }
        }
        Err(e) => {
            let mut tr = failure("enumerate", e);
            if let Some(partial) = &cx.partial {
                let counts: Vec<usize> = partial.counts();
                tr.summary = format!("{e}; complete levels a = {}", join(&counts));
                tr.payload = json!({ "error": e, "counts": counts, "levels": render(partial, partial.len()) });
            }
            tr
        }
    }
}

fn measure_payload(cx: &Context, r: &MeasureReport) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "base": cx.structure(&v.base),
                "ext1": cx.structure(&v.ext1),
                "ext2": cx.structure(&v.ext2),
                "lhs": v.lhs.to_wire(),
                "rhs": v.rhs.to_wire(),
                "amalgams": v.amalgams.iter().map(|a| cx.structure(a)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let zeros: Vec<Value> =
        r.zero_values.iter().map(|z| json!({ "class": z.class.to_hex(), "descriptor": cx.label(&z.class), "size": z.size })).collect();
    json!({
        "bases_checked": r.bases_checked,
        "pairs_checked": r.pairs_checked,
        "regular": r.is_regular(),
        "violations": violations,
        "zero_values": zeros,
    })
}

fn measure_check(cx: &Context) -> TaskReport {
    let m = match &cx.measure {
        Ok(m) => m,
        Err(e) => return failure("measure-check", e),
    };
    match m.verify_r_measure(cx.level) {
        Ok(r) => {
            let mut summary = format!("{} pairs over {} bases", r.pairs_checked, r.bases_checked);
            if let Some(v) = r.violations.first() {
                summary += &format!(
                    ", {} violations, first over {}: {} != {}",
                    r.violations.len(),
                    cx.age.describe(&v.base),
                    v.lhs,
                    v.rhs
                );
            }
            match r.smallest_zero_size() {
                Some(size) => summary += &format!(", not regular from size {size}"),
                None => summary += ", regular",
            }
            TaskReport {
                task: "measure-check",
                status: Status::from_bool(r.passed()),
                payload: measure_payload(cx, &r),
                summary,
                wall: Duration::ZERO,
            }
        }
        Err(e) => failure("measure-check", e),
    }
}

/// Rows and columns are named by class id.
fn matrix(levels: &Levels, m: &orbit_lie::linalg::LevelMatrix) -> Value {
    let (source, target) = (levels.level(m.source()[0]), levels.level(m.target()[0]));
    let entries: Vec<Value> = m
        .entries()
        .map(|(row, col, v)| {
            json!({ "row": target[row].id.to_hex(), "col": source[col].id.to_hex(), "value": v.to_wire() })
        })
        .collect();
    json!({
        "source_level": m.source()[0],
        "target_level": m.target()[0],
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
    })
}

fn action<'a>(cx: &'a Context, task: &'static str) -> Result<&'a ActionTruncation, TaskReport> {
    match &cx.action {
        Some(Ok(a)) => Ok(a),
        Some(Err(e)) => Err(failure(task, e)),
        None => Err(failure(task, cx.measure.as_ref().err().or(cx.levels.as_ref().err()).cloned().unwrap_or_default())),
    }
}

fn sl2_check(cx: &Context) -> TaskReport {
    let a = match action(cx, "sl2-check") {
        Ok(a) => a,
        Err(tr) => return tr,
    };
    let report = a.verify_sl2();
    let top = a.max_level();
    let e: Vec<Value> = (0..=top).map(|n| matrix(a.levels(), a.e(n).expect("in range"))).collect();
    let f: Vec<Value> = (1..=top + 1).map(|n| matrix(a.levels(), a.f(n).expect("in range"))).collect();
    let h: Vec<Value> = (0..=top).map(|n| json!({ "level": n, "value": a.h(n).expect("in range").to_wire() })).collect();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "relation": v.relation,
                "level": v.level,
                "row": cx.label(&v.row),
                "col": cx.label(&v.col),
                "expected": v.expected.to_wire(),
                "actual": v.actual.to_wire(),
            })
        })
        .collect();
    let mut summary = format!("[e,f]=h, [h,e]=2e, [h,f]=-2f on levels 0..={top}");
    if let Some(v) = report.violations.first() {
        summary += &format!("; {} violations, first {} at level {}", report.violations.len(), v.relation, v.level);
    }
    let injective = a.e_ranks().iter().all(|&(_, rank, size)| rank == size);
    TaskReport {
        task: "sl2-check",
        status: Status::from_bool(report.passed()),
        payload: json!({
            "mu_X": a.mu_x().to_wire(),
            "levels_checked": report.levels_checked,
            "e": e,
            "f": f,
            "h": h,
            "e_injective": injective,
            "violations": violations,
        }),
        summary,
        wall: Duration::ZERO,
    }
}

fn glr_check(cx: &Context, p: GlrParams) -> TaskReport {
    let m = match &cx.measure {
        Ok(m) => m,
        Err(e) => return failure("glr-check", e),
    };
    let degree = p.degree.unwrap_or(cx.level);
    let gl = match GlAction::build(m, p.r, degree) {
        Ok(gl) => gl,
        Err(e) => return failure("glr-check", e),
    };
    let report = gl.verify();
    let pieces: Vec<Value> = gl
        .basis()
        .grades()
        .filter(|d| d.iter().sum::<usize>() <= degree)
        .map(|d| json!({ "multidegree": d, "size": gl.basis().piece(d).len() }))
        .collect();
    let id = |x: &Option<IsoClassId>| x.as_ref().map(IsoClassId::to_hex);
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "relation": v.relation,
                "multidegree": v.grade,
                "row": id(&v.row),
                "col": id(&v.col),
                "expected": v.expected.to_wire(),
                "actual": v.actual.to_wire(),
            })
        })
        .collect();
    let mut summary = format!(
        "gl_{} to degree {degree}: {} commutators, {} symmetries",
        p.r, report.commutators_checked, report.symmetries_checked
    );
    if let Some(v) = report.violations.first() {
        summary += &format!("; {} violations, first {} at {:?}", report.violations.len(), v.relation, v.grade);
    }
    TaskReport {
        task: "glr-check",
        status: Status::from_bool(report.passed()),
        payload: json!({
            "r": p.r,
            "degree": degree,
            "commutators_checked": report.commutators_checked,
            "symmetries_checked": report.symmetries_checked,
            "pieces": pieces,
            "violations": violations,
        }),
        summary,
        wall: Duration::ZERO,
    }
}

/// The size of a model whose own age has one class per size, when the spec
/// is that model beside a sort of sets.
fn mixed_with_sets(spec: &AgeSpec) -> Option<usize> {
    let AgeSpec::DisjointUnion { components, .. } = spec else { return None };
    let [a, b] = components.as_slice() else { return None };
    let model = match (a, b) {
        (AgeSpec::FiniteModel(m), AgeSpec::Sets { .. }) | (AgeSpec::Sets { .. }, AgeSpec::FiniteModel(m)) => m,
        _ => return None,
    };
    let counts = Age::new(AgeSpec::FiniteModel(model.clone())).ok()?.enumerate_levels(model.n(), None).ok()?.counts();
    counts.iter().all(|&c| c == 1).then_some(model.n())
}

fn first_differences(a: &[u64]) -> Vec<i128> {
    (0..a.len()).map(|n| a[n] as i128 - if n == 0 { 0 } else { a[n - 1] as i128 }).collect()
}

fn verma(cx: &Context) -> TaskReport {
    let a = match cx.counts() {
        Some(a) => a,
        None => return failure("verma", cx.levels.as_ref().err().cloned().unwrap_or_default()),
    };
    let mut ok = true;
    let mut summary = Vec::new();
    let mut payload = serde_json::Map::new();
    let mu = cx.action.as_ref().and_then(|r| r.as_ref().ok()).map(|act| act.mu_x().clone());

    if cx.age.is_infinite() {
        match verma_multiplicities(&a, mu.as_ref()) {
            Ok(d) => {
                let m = d.multiplicities();
                let identity = character_identity_holds(&a, &m);
                ok &= identity;
                summary.push(format!("m = {}", join(&m)));
                let entries: Vec<Value> = d
                    .entries
                    .iter()
                    .map(|e| {
                        json!({
                            "level": e.level,
                            "lowest_weight": e.lowest_weight.as_ref().map(Scalar::to_wire),
                            "multiplicity": e.multiplicity,
                        })
                    })
                    .collect();
                payload.insert(
                    "decomposition".into(),
                    json!({ "mu_X": d.mu_x.as_ref().map(Scalar::to_wire), "entries": entries }),
                );
                payload.insert("character_identity".into(), json!(identity));
            }
            Err(e) => {
                ok = false;
                summary.push(e.to_string());
                payload.insert("decomposition".into(), Value::Null);
                payload.insert("error".into(), json!(e.to_string()));
            }
        }
    } else {
        let size = a.iter().position(|&c| c == 0).map(|z| z - 1);
        let upto = size.map_or(a.len(), |s| s + 1);
        let r = finite_case_decomposition(&a[..upto], &FiniteCase::Finite { size: size.unwrap_or(a.len()) });
        ok &= r.passed();
        summary.push(format!(
            "finite: symmetric {}, unimodal {}",
            r.symmetric.map_or("unknown".into(), |s| s.to_string()),
            r.unimodal
        ));
        payload.insert("decomposition".into(), Value::Null);
        payload.insert("finite_case".into(), json!({ "size": size, "symmetric": r.symmetric, "unimodal": r.unimodal }));
    }

    if let Some(m) = mixed_with_sets(cx.age.spec()) {
        let r = finite_case_decomposition(&a, &FiniteCase::MixedWithSets { model_size: m });
        ok &= r.passed();
        summary.push(format!("model-plus-sets strings {}", if r.passed() { "hold" } else { "fail" }));
        payload.insert("mixed_case".into(), json!({ "model_size": m, "shifted_strings": r.shifted_strings }));
    }

    if matches!(cx.age.spec(), AgeSpec::DisjointUnion { .. }) {
        let series: Result<Vec<Vec<u64>>, _> = cx
            .age
            .components()
            .iter()
            .map(|c| c.enumerate_levels(cx.level, None).map(|l| l.counts().into_iter().map(|x| x as u64).collect()))
            .collect();
        if let Ok(series) = series {
            let holds = product_multiplicities(&series, a.len()) == first_differences(&a);
            ok &= holds;
            summary.push(format!("product law {}", if holds { "holds" } else { "fails" }));
            payload.insert("product_law".into(), json!(holds));
        }
    }

    let kernel = match (&cx.action, &cx.measure) {
        (Some(Ok(act)), Ok(m)) => match kernel_cross_check(act, m) {
            Ok(KernelStatus::Checked(levels)) => {
                let agree = levels.iter().all(|k| k.agrees());
                ok &= agree;
                summary.push(format!("kernel check {}", if agree { "agrees" } else { "disagrees" }));
                let levels: Vec<Value> = levels
                    .iter()
                    .map(|k| {
                        json!({
                            "level": k.level,
                            "kernel_dim": k.kernel_dim,
                            "multiplicity": k.multiplicity,
                            "agrees": k.agrees(),
                        })
                    })
                    .collect();
                json!({ "status": "checked", "levels": levels })
            }
            Ok(KernelStatus::Skipped(why)) => {
                summary.push(format!("kernel check skipped: {why}"));
                json!({ "status": "skipped", "reason": why })
            }
            Err(e) => {
                ok = false;
                json!({ "status": "error", "reason": e.to_string() })
            }
        },
        _ => {
            let why = cx.measure.as_ref().err().cloned().unwrap_or_else(|| "no matrices".into());
            summary.push("kernel check skipped: no measure".into());
            json!({ "status": "skipped", "reason": why })
        }
    };
    payload.insert("kernel_check".into(), kernel);

    TaskReport {
        task: "verma",
        status: Status::from_bool(ok),
        payload: Value::Object(payload),
        summary: summary.join("; "),
        wall: Duration::ZERO,
    }
}

fn diagnostics(cx: &Context) -> TaskReport {
    let a = match cx.counts() {
        Some(a) => a,
        None => return failure("diagnostics", cx.levels.as_ref().err().cloned().unwrap_or_default()),
    };
    let d = sequence_diagnostics(&a);
    let flags = [("monotone", d.monotone), ("symmetric", d.symmetric), ("unimodal", d.unimodal), ("log-concave", d.log_concave)];
    let summary = flags.iter().map(|(k, v)| format!("{}{k}", if *v { "" } else { "not " })).collect::<Vec<_>>().join(", ");
    TaskReport {
        task: "diagnostics",
        status: Status::Pass,
        payload: json!({
            "sequence": a,
            "monotone": d.monotone,
            "symmetric": d.symmetric,
            "unimodal": d.unimodal,
            "log_concave": d.log_concave,
        }),
        summary,
        wall: Duration::ZERO,
    }
}

pub(crate) fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}
