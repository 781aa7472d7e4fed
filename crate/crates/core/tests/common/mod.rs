//! Builders and brute-force oracles shared by the integration tests. The
//! oracles use only vertex permutations and relation lookups, never the
//! search code they are checked against.

#![allow(dead_code)]

use std::sync::Arc;

use itertools::Itertools;
use num_rational::BigRational;
use orbit_lie::age::{Param, UnionRule};
use orbit_lie::measure::Specialization;
use orbit_lie::{Age, AgeSpec, FiniteStructure, Measure, Signature};

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> FiniteStructure {
    let sig = Signature::new(["E"]).unwrap();
    let pairs = edges.iter().flat_map(|&(a, b)| [(0, a, b), (0, b, a)]);
    FiniteStructure::from_pairs(sig, n, pairs).unwrap()
}

pub fn complete(m: usize) -> FiniteStructure {
    let edges: Vec<_> = (0..m).tuple_combinations().collect();
    graph(m, &edges)
}

pub fn path3() -> FiniteStructure {
    graph(3, &[(0, 1), (1, 2)])
}

pub fn sets() -> AgeSpec {
    AgeSpec::sets(Param::symbolic())
}

pub fn model(m: usize) -> AgeSpec {
    AgeSpec::FiniteModel(complete(m))
}

/// Two sorts of sets with parameters `l1` and `l2`.
pub fn two_sets(rule: UnionRule) -> AgeSpec {
    AgeSpec::DisjointUnion {
        components: vec![AgeSpec::sets(Param::Symbol("l1".into())), AgeSpec::sets(Param::Symbol("l2".into()))],
        rule,
    }
}

pub fn age(spec: AgeSpec) -> Arc<Age> {
    Arc::new(Age::new(spec).unwrap())
}

pub fn measure(spec: AgeSpec) -> Measure {
    Measure::symbolic(age(spec)).unwrap()
}

pub fn measure_at(spec: AgeSpec, at: &[(&str, BigRational)]) -> Measure {
    let s: Specialization = at.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    Measure::new(age(spec), &s).unwrap()
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).permutations(n)
}

/// Least relabelling under the derived order: an exhaustive canonical form.
pub fn brute_canonical(s: &FiniteStructure) -> FiniteStructure {
    permutations(s.n()).map(|p| s.relabel(&p)).min().unwrap_or_else(|| s.clone())
}

pub fn brute_isomorphic(s: &FiniteStructure, t: &FiniteStructure) -> bool {
    s.n() == t.n() && permutations(s.n()).any(|p| &s.relabel(&p) == t)
}

/// Injective maps preserving and reflecting every relation, by trying all
/// of them.
pub fn brute_embeddings(s: &FiniteStructure, t: &FiniteStructure) -> u64 {
    let rels = s.num_relations();
    (0..t.n())
        .permutations(s.n())
        .filter(|phi| {
            (0..rels).all(|r| (0..s.n()).cartesian_product(0..s.n()).all(|(a, b)| s.has(r, a, b) == t.has(r, phi[a], phi[b])))
        })
        .count() as u64
}

/// Number of `s.n()`-subsets of `t` inducing a copy of `s`.
pub fn brute_subset_count(s: &FiniteStructure, t: &FiniteStructure) -> u64 {
    (0..t.n())
        .combinations(s.n())
        .filter(|vs| brute_isomorphic(&t.induced_substructure(vs).unwrap(), s))
        .count() as u64
}

/// All structures on `n` vertices over one binary relation, loops included.
pub fn all_digraphs(n: usize) -> Vec<FiniteStructure> {
    let sig = Signature::new(["E"]).unwrap();
    let cells: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).collect();
    (0..1u64 << cells.len())
        .map(|mask| {
            let pairs = cells.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &(a, b))| (0, a, b));
            FiniteStructure::from_pairs(sig.clone(), n, pairs).unwrap()
        })
        .collect()
}

/// All simple graphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<FiniteStructure> {
    let slots: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    (0..1u64 << slots.len())
        .map(|mask| {
            let edges: Vec<_> = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            graph(n, &edges)
        })
        .collect()
}

pub fn fibonacci(len: usize) -> Vec<u64> {
    let mut out = vec![1u64, 1];
    while out.len() < len {
        out.push(out[out.len() - 1] + out[out.len() - 2]);
    }
    out.truncate(len);
    out
}
