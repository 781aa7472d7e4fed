use super::*;
use crate::age::AgeSpec;
use crate::age::Param;
use crate::structure::{FiniteStructure, Signature};

fn complete(m: usize) -> FiniteStructure {
    let sig = Signature::new(["E"]).unwrap();
    let pairs = (0..m).flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (0, a, b)));
    FiniteStructure::from_pairs(sig, m, pairs).unwrap()
}

fn measure(spec: AgeSpec) -> Measure {
    Measure::symbolic(Arc::new(Age::new(spec).unwrap())).unwrap()
}

fn index(action: &ActionTruncation, n: usize, label: &str) -> usize {
    action
        .levels()
        .level(n)
        .iter()
        .position(|c| action.age().describe(&c.rep) == label)
        .unwrap_or_else(|| panic!("no class {label} at level {n}"))
}

/// Coefficient of the arrow `from -> to` in `e` (raising) or `f` (lowering).
fn arrow(action: &ActionTruncation, op: Operator, from: &str, to: &str) -> Scalar {
    let n = if from == "∅" {
        0
    } else {
        from.trim_matches(|c| c == '[' || c == ']').split(',').map(|x| x.parse::<usize>().unwrap()).sum()
    };
    let (m, target) = match op {
        Operator::E => (action.e(n).unwrap(), n + 1),
        Operator::F => (action.f(n).unwrap(), n - 1),
    };
    m.get(index(action, target, to), index(action, n, from))
}

#[test]
fn fibonacci_e_figure() {
    let action = ActionTruncation::build(&measure(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2)))), 4, None).unwrap();
    let edges = [
        ("∅", "[1]", 1),
        ("[1]", "[2]", 2),
        ("[1]", "[1,1]", 2),
        ("[2]", "[2,1]", 1),
        ("[2]", "[1,2]", 1),
        ("[1,1]", "[2,1]", 2),
        ("[1,1]", "[1,2]", 2),
        ("[1,1]", "[1,1,1]", 3),
        ("[2,1]", "[2,1,1]", 2),
        ("[2,1]", "[1,2,1]", 1),
        ("[2,1]", "[2,2]", 2),
        ("[1,2]", "[1,2,1]", 1),
        ("[1,2]", "[1,1,2]", 2),
        ("[1,2]", "[2,2]", 2),
        ("[1,1,1]", "[1,1,1,1]", 4),
        ("[1,1,1]", "[2,1,1]", 2),
        ("[1,1,1]", "[1,2,1]", 2),
        ("[1,1,1]", "[1,1,2]", 2),
    ];
    for (from, to, v) in edges {
        assert_eq!(arrow(&action, Operator::E, from, to), Scalar::int(v), "{from} -> {to}");
    }
    for n in 0..=4 {
        assert_eq!(action.h(n).unwrap(), &Scalar::int(2 * n as i64 + 2));
    }
}

#[test]
fn fibonacci_f_figure() {
    let action = ActionTruncation::build(&measure(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2)))), 4, None).unwrap();
    let edges = [
        ("[1]", "∅", -2),
        ("[2]", "[1]", 1),
        ("[1,1]", "[1]", -4),
        ("[2,1]", "[2]", -2),
        ("[1,2]", "[2]", -2),
        ("[2,1]", "[1,1]", 1),
        ("[1,2]", "[1,1]", 1),
        ("[1,1,1]", "[1,1]", -6),
        ("[2,1,1]", "[2,1]", -4),
        ("[1,2,1]", "[2,1]", -2),
        ("[2,2]", "[2,1]", 1),
        ("[1,2,1]", "[1,2]", -2),
        ("[1,1,2]", "[1,2]", -4),
        ("[2,2]", "[1,2]", 1),
        ("[1,1,1,1]", "[1,1,1]", -8),
        ("[2,1,1]", "[1,1,1]", 1),
        ("[1,2,1]", "[1,1,1]", 1),
        ("[1,1,2]", "[1,1,1]", 1),
    ];
    for (from, to, v) in edges {
        assert_eq!(arrow(&action, Operator::F, from, to), Scalar::int(v), "{from} -> {to}");
    }
}

#[test]
fn sets_closed_forms() {
    let action = ActionTruncation::build(&measure(AgeSpec::sets(Param::symbolic())), 8, None).unwrap();
    let l = Scalar::lambda();
    for n in 0..=8usize {
        assert_eq!(action.e(n).unwrap().get(0, 0), Scalar::int(n as i64 + 1));
        assert_eq!(action.f(n + 1).unwrap().get(0, 0), &l - Scalar::int(n as i64));
        assert_eq!(action.h(n).unwrap(), &(Scalar::int(2 * n as i64) - &l));
    }
    assert!(action.verify_sl2().passed());
}

#[test]
fn sl2_relations_for_fibonacci() {
    let action = ActionTruncation::build(&measure(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2)))), 5, None).unwrap();
    let report = action.verify_sl2();
    assert!(report.passed(), "{:?}", report.violations);
}

#[test]
fn broken_measure_is_caught() {
    // the additive union rule is not an R-measure, and [e,f] = h fails for it
    let age = Arc::new(
        Age::new(AgeSpec::DisjointUnion {
            components: vec![AgeSpec::sets(Param::symbolic()), AgeSpec::FiniteModel(complete(2))],
            rule: crate::age::UnionRule::Sum,
        })
        .unwrap(),
    );
    let m = Measure::symbolic(age).unwrap();
    let action = ActionTruncation::build(&m, 3, None).unwrap();
    assert!(!action.verify_sl2().passed());
}

#[test]
fn e_is_injective_for_infinite_ages() {
    let action = ActionTruncation::build(&measure(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2)))), 5, None).unwrap();
    for (n, rank, a) in action.e_ranks() {
        assert_eq!(rank, a, "level {n}");
    }
}

#[test]
fn glr_sets_r3() {
    let m = measure(AgeSpec::sets(Param::symbolic()));
    let gl = GlAction::build(&m, 3, 4).unwrap();
    for total in 0..=4 {
        for d in glr::multidegrees(2, total) {
            assert_eq!(gl.basis().piece(&d).len(), 1, "{d:?}");
        }
    }
    // E13 from (a, b) to (a + 1, b) and E12 from (a, b) to (a + 1, b - 1) both have coefficient a + 1
    assert_eq!(gl.matrix(1, 3, &[2, 1]).unwrap().get(0, 0), Scalar::int(3));
    assert_eq!(gl.matrix(1, 2, &[2, 1]).unwrap().get(0, 0), Scalar::int(3));
    assert_eq!(gl.matrix(1, 1, &[2, 1]).unwrap().get(0, 0), Scalar::int(2));
    let report = gl.verify();
    assert!(report.passed(), "{:?}", report.violations);
    assert!(report.symmetries_checked > 0);
}

#[test]
fn glr_r2_reproduces_e_and_f() {
    let m = measure(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2))));
    let action = ActionTruncation::build(&m, 3, None).unwrap();
    let gl = GlAction::build(&m, 2, 2).unwrap();
    for n in 0..=3 {
        let e = gl.matrix(1, 2, &[n]).unwrap();
        let ours = action.e(n).unwrap();
        assert_eq!(e.nnz(), ours.nnz());
        // with a single colour the colored and uncolored ids differ by the colour bytes only
        for (r, c, v) in ours.entries() {
            let row = &action.class(n + 1, r).id;
            let col = &action.class(n, c).id;
            let find = |d: usize, id: &IsoClassId| {
                gl.basis().piece(&[d]).iter().position(|k| &canonical_form(k.rep.base()) == id).unwrap()
            };
            assert_eq!(&e.get(find(n + 1, row), find(n, col)), v);
        }
        if n >= 1 {
            assert_eq!(gl.matrix(2, 1, &[n]).unwrap().nnz(), action.f(n).unwrap().nnz());
        }
    }
}

#[test]
fn times_q_colored_basis() {
    let m = measure(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2))));
    let gl = GlAction::build(&m, 3, 2).unwrap();
    // [2] with one vertex of each colour is one class; [1,1] gives two
    assert_eq!(gl.basis().piece(&[1, 1]).len(), 3);
}

#[test]
fn specialization_commutes() {
    let age = Arc::new(Age::new(AgeSpec::times_q(AgeSpec::sets(Param::symbolic()))).unwrap());
    let symbolic = ActionTruncation::build(&Measure::symbolic(age.clone()).unwrap(), 4, None).unwrap();
    for q in [BigRational::new(5.into(), 2.into()), BigRational::from_integer((-3).into()), BigRational::from_integer(11.into())] {
        let spec: crate::measure::Specialization = [("lambda".to_string(), q.clone())].into();
        let direct = ActionTruncation::build(&Measure::new(age.clone(), &spec).unwrap(), 4, None).unwrap();
        let after = symbolic.specialize(&q).unwrap();
        for n in 0..=4 {
            assert_eq!(direct.e(n), after.e(n));
            assert_eq!(direct.f(n), after.f(n));
            assert_eq!(direct.h(n), after.h(n));
        }
    }
}

#[test]
fn dot_output() {
    let action = ActionTruncation::build(&measure(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2)))), 4, None).unwrap();
    let e = emit_dot(&action, Operator::E);
    let edges = e.lines().filter(|l| l.contains("->")).count();
    let nnz: usize = (0..4).map(|n| action.e(n).unwrap().nnz()).sum();
    assert_eq!(edges, nnz);
    assert!(e.contains("rankdir=LR"));
    let empty = ActionTruncation::build(&measure(AgeSpec::LinearOrders), 0, None).unwrap();
    let d = emit_dot(&empty, Operator::F);
    assert!(d.contains("[label=\"∅\"]") && !d.contains("->"));
}
