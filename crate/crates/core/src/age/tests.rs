use std::collections::BTreeMap;

use super::*;
use crate::structure::{canonical_form, Signature};

fn complete(m: usize) -> FiniteStructure {
    let sig = Signature::new(["E"]).unwrap();
    let pairs = (0..m).flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (0, a, b)));
    FiniteStructure::from_pairs(sig, m, pairs).unwrap()
}

fn path3() -> FiniteStructure {
    let sig = Signature::new(["E"]).unwrap();
    FiniteStructure::from_pairs(sig, 3, [(0, 0, 1), (0, 1, 0), (0, 1, 2), (0, 2, 1)]).unwrap()
}

fn fib_age() -> Age {
    Age::new(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2)))).unwrap()
}

fn level_counts(spec: AgeSpec, n: usize) -> Vec<usize> {
    Age::new(spec).unwrap().enumerate_levels(n, None).unwrap().counts()
}

/// The `TimesQ(K2)` member with the given block sizes, blocks in order.
fn blocks_structure(age: &Age, sizes: &[usize]) -> FiniteStructure {
    let n: usize = sizes.iter().sum();
    let mut s = FiniteStructure::new(age.signature().clone(), n).unwrap();
    let mut start = 0;
    let mut block_of = Vec::new();
    for (i, &k) in sizes.iter().enumerate() {
        for a in start..start + k {
            block_of.push(i);
            for b in start..start + k {
                if a != b {
                    s.set(0, a, b, true);
                }
            }
        }
        start += k;
    }
    for a in 0..n {
        for b in 0..n {
            if block_of[a] < block_of[b] {
                s.set(1, a, b, true);
            }
        }
    }
    s
}

#[test]
fn signatures_of_combinators() {
    let du = Age::new(AgeSpec::disjoint_union(vec![AgeSpec::LinearOrders, AgeSpec::sets(Param::symbolic())]))
        .unwrap();
    assert_eq!(du.signature().symbols(), ["sort1", "sort2", "1.<"]);
    let tq = Age::new(AgeSpec::times_q(AgeSpec::times_q(AgeSpec::LinearOrders))).unwrap();
    assert_eq!(tq.signature().symbols(), ["<", "order", "order'"]);
    let ms = Age::new(AgeSpec::multiset_over(AgeSpec::LinearOrders)).unwrap();
    assert_eq!(ms.signature().symbols(), ["<", "eq"]);
    assert_eq!(Age::new(AgeSpec::disjoint_union(vec![])).unwrap_err(), AgeError::EmptyUnion);
}

#[test]
fn flags() {
    assert!(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2))).is_infinite());
    assert!(!AgeSpec::FiniteModel(complete(2)).is_infinite());
    assert!(!AgeSpec::multiset_over(AgeSpec::LinearOrders).has_measure());
    let mixed = AgeSpec::disjoint_union(vec![AgeSpec::FiniteModel(complete(2)), AgeSpec::sets(Param::symbolic())]);
    assert!(mixed.is_infinite() && mixed.has_measure());
}

#[test]
fn param_parsing() {
    assert_eq!("symbolic".parse::<Param>().unwrap(), Param::symbolic());
    assert_eq!("l1".parse::<Param>().unwrap(), Param::Symbol("l1".into()));
    assert_eq!(
        "7/2".parse::<Param>().unwrap(),
        Param::Value(BigRational::new(7.into(), 2.into()))
    );
    assert_eq!("-3".parse::<Param>().unwrap(), Param::Value(BigRational::from_integer((-3).into())));
    assert!("1+x".parse::<Param>().is_err());
}

#[test]
fn linear_orders_reject_cycles() {
    let age = Age::new(AgeSpec::LinearOrders).unwrap();
    let sig = age.signature().clone();
    let cycle = FiniteStructure::from_pairs(sig.clone(), 3, [(0, 0, 1), (0, 1, 2), (0, 2, 0)]).unwrap();
    assert!(!age.contains(&cycle).unwrap());
    let chain = FiniteStructure::from_pairs(sig, 3, [(0, 0, 1), (0, 1, 2), (0, 0, 2)]).unwrap();
    assert!(age.contains(&chain).unwrap());
}

#[test]
fn finite_model_rejects_oversized() {
    let age = Age::new(AgeSpec::FiniteModel(complete(2))).unwrap();
    assert!(!age.contains(&complete(3)).unwrap());
    assert!(age.contains(&complete(2)).unwrap());
}

#[test]
fn times_q_membership() {
    let age = fib_age();
    assert!(age.contains(&blocks_structure(&age, &[2, 1])).unwrap());
    // an edge across blocks is not allowed
    let mut bad = blocks_structure(&age, &[1, 1]);
    bad.set(0, 0, 1, true);
    bad.set(0, 1, 0, true);
    assert!(!age.contains(&bad).unwrap());
    // incomparable points without an edge would form a 2-point block that is not in K2's age
    let loose = FiniteStructure::new(age.signature().clone(), 2).unwrap();
    assert!(!age.contains(&loose).unwrap());
}

#[test]
fn signature_mismatch_is_an_error() {
    let age = Age::new(AgeSpec::LinearOrders).unwrap();
    assert_eq!(age.contains(&complete(2)), Err(AgeError::SignatureMismatch));
}

#[test]
fn fibonacci_tribonacci_partitions() {
    assert_eq!(level_counts(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2))), 6), [1, 1, 2, 3, 5, 8, 13]);
    assert_eq!(level_counts(AgeSpec::times_q(AgeSpec::FiniteModel(complete(3))), 6), [1, 1, 2, 4, 7, 13, 24]);
    assert_eq!(level_counts(AgeSpec::multiset_over(AgeSpec::LinearOrders), 6), [1, 1, 2, 3, 5, 7, 11]);
}

#[test]
fn colored_sets_binomials() {
    let counts = level_counts(AgeSpec::colored(AgeSpec::sets(Param::symbolic()), 3), 6);
    let expected: Vec<usize> = (0..=6).map(|n| (n + 1) * (n + 2) / 2).collect();
    assert_eq!(counts, expected);
}

#[test]
fn disjoint_union_product_rule() {
    let a = AgeSpec::times_q(AgeSpec::FiniteModel(complete(2)));
    let b = AgeSpec::FiniteModel(complete(3));
    let ra = level_counts(a.clone(), 5);
    let rb = level_counts(b.clone(), 5);
    let du = level_counts(AgeSpec::disjoint_union(vec![a, b]), 5);
    for n in 0..=5 {
        let conv: usize = (0..=n).map(|i| ra[i] * rb[n - i]).sum();
        assert_eq!(du[n], conv, "level {n}");
    }
}

#[test]
fn finite_models_have_empty_top_levels() {
    assert_eq!(level_counts(AgeSpec::FiniteModel(complete(2)), 4), [1, 1, 1, 0, 0]);
    assert_eq!(level_counts(AgeSpec::FiniteModel(path3()), 3), [1, 1, 2, 1]);
}

#[test]
fn extension_counts() {
    let sets = Age::new(AgeSpec::sets(Param::symbolic())).unwrap();
    let lo = Age::new(AgeSpec::LinearOrders).unwrap();
    for n in 0..5 {
        let s = sets.enumerate_levels(n, None).unwrap().level(n)[0].rep.clone();
        assert_eq!(sets.one_point_extensions(&s).unwrap().len(), 1);
        let o = lo.enumerate_levels(n, None).unwrap().level(n)[0].rep.clone();
        assert_eq!(lo.one_point_extensions(&o).unwrap().len(), n + 1);
    }
}

#[test]
fn four_extensions_of_two_one() {
    let age = fib_age();
    let exts = age.one_point_extensions(&blocks_structure(&age, &[2, 1])).unwrap();
    assert_eq!(exts.len(), 4);
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    for e in &exts {
        *classes.entry(age.describe(e.assembled())).or_default() += 1;
    }
    let expected: BTreeMap<String, usize> =
        [("[2,2]".to_string(), 1), ("[2,1,1]".to_string(), 2), ("[1,2,1]".to_string(), 1)].into();
    assert_eq!(classes, expected);
}

#[test]
fn extensions_require_membership() {
    let age = Age::new(AgeSpec::FiniteModel(complete(2))).unwrap();
    assert_eq!(age.one_point_extensions(&complete(3)), Err(AgeError::NotMember));
    assert!(age.one_point_extensions(&complete(2)).unwrap().is_empty());
}

#[test]
fn amalgams_over_empty_base() {
    let sets = Age::new(AgeSpec::sets(Param::symbolic())).unwrap();
    let pt = &sets.one_point_extensions(&sets.empty_structure()).unwrap()[0];
    let am = sets.one_point_amalgamations(pt, pt).unwrap();
    assert_eq!(am.len(), 2);
    assert_eq!(am.iter().filter(|a| a.is_identified()).count(), 1);

    let lo = Age::new(AgeSpec::LinearOrders).unwrap();
    let pt = &lo.one_point_extensions(&lo.empty_structure()).unwrap()[0];
    let am = lo.one_point_amalgamations(pt, pt).unwrap();
    assert_eq!(am.len(), 3);
}

#[test]
fn amalgam_of_opposite_insertions_is_forced() {
    let lo = Age::new(AgeSpec::LinearOrders).unwrap();
    let point = lo.enumerate_levels(1, None).unwrap().level(1)[0].rep.clone();
    let exts = lo.one_point_extensions(&point).unwrap();
    let below = exts.iter().find(|e| e.assembled().has(0, 1, 0)).unwrap();
    let above = exts.iter().find(|e| e.assembled().has(0, 0, 1)).unwrap();
    let am = lo.one_point_amalgamations(below, above).unwrap();
    assert_eq!(am.len(), 1);
    let s = &am[0].structure;
    assert!(s.has(0, 1, 0) && s.has(0, 0, 2) && s.has(0, 1, 2));
    assert_eq!(am[0].j1, [0, 1]);
    assert_eq!(am[0].j2, [0, 2]);
}

#[test]
fn amalgams_need_a_common_base() {
    let lo = Age::new(AgeSpec::LinearOrders).unwrap();
    let e0 = lo.one_point_extensions(&lo.empty_structure()).unwrap().remove(0);
    let e1 = lo.one_point_extensions(e0.assembled()).unwrap().remove(0);
    assert_eq!(lo.one_point_amalgamations(&e0, &e1), Err(AgeError::DifferentBases));
}

#[test]
fn homogeneity_of_small_models() {
    for m in 1..=4 {
        assert!(check_homogeneity_finite_model(&complete(m)).is_homogeneous(), "K{m}");
    }
    let report = check_homogeneity_finite_model(&path3());
    let bad = report.counterexample.expect("P3 is not homogeneous");
    assert_eq!(report.automorphisms, 2);
    // the witness is a genuine isomorphism between induced substructures
    let img1 = path3().induced_ordered(&bad.embedding1).unwrap();
    let img2 = path3().induced_ordered(&bad.embedding2).unwrap();
    assert_eq!(img1, img2);
    assert_eq!(img1, bad.sub);
}

#[test]
fn hereditarity() {
    for spec in [
        AgeSpec::times_q(AgeSpec::FiniteModel(complete(2))),
        AgeSpec::multiset_over(AgeSpec::LinearOrders),
        AgeSpec::disjoint_union(vec![AgeSpec::LinearOrders, AgeSpec::FiniteModel(complete(2))]),
    ] {
        let age = Age::new(spec).unwrap();
        let levels = age.enumerate_levels(5, None).unwrap();
        for n in 1..=5 {
            for c in levels.level(n) {
                for v in 0..n {
                    let id = canonical_form(&c.rep.delete_vertex(v).unwrap());
                    assert!(levels.index_of(n - 1, &id).is_some());
                }
            }
        }
    }
}

#[test]
fn descriptors() {
    let age = fib_age();
    assert_eq!(age.describe(&age.empty_structure()), "∅");
    assert_eq!(age.describe(&blocks_structure(&age, &[1, 2, 1])), "[1,2,1]");
    let p3 = Age::new(AgeSpec::FiniteModel(path3())).unwrap();
    let labels: Vec<String> =
        p3.enumerate_levels(2, None).unwrap().level(2).iter().map(|c| p3.describe(&c.rep)).collect();
    assert_eq!(labels, ["2#1", "2#2"]);
    let du = Age::new(AgeSpec::colored(AgeSpec::sets(Param::symbolic()), 2)).unwrap();
    let l2: Vec<String> =
        du.enumerate_levels(2, None).unwrap().level(2).iter().map(|c| du.describe(&c.rep)).collect();
    let mut sorted = l2.clone();
    sorted.sort();
    assert_eq!(sorted, ["(1|1)", "(2|∅)", "(∅|2)"]);
    let ms = Age::new(AgeSpec::multiset_over(AgeSpec::LinearOrders)).unwrap();
    let mut l3: Vec<String> =
        ms.enumerate_levels(3, None).unwrap().level(3).iter().map(|c| ms.describe(&c.rep)).collect();
    l3.sort();
    assert_eq!(l3, ["{1,1,1}", "{2,1}", "{3}"]);
}

#[test]
fn cap_keeps_partial_levels() {
    let err = fib_age().enumerate_levels(8, Some(4)).unwrap_err();
    match err {
        AgeError::CapExceeded { level, size, partial, .. } => {
            assert_eq!((level, size), (4, 5));
            assert_eq!(partial.counts(), [1, 1, 2, 3]);
        }
        other => panic!("unexpected {other:?}"),
    }
}
