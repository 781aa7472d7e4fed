//! R-measures and the amalgamation-axiom verifier.
//!
//! Values live in Q(lambda). Every `Sets` component has a parameter; named
//! parameters may be specialized to rationals, and at most one name may be
//! left free, which then becomes the indeterminate `lambda`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::age::{Age, AgeError, AgeSpec, Node, OnePointExtension, Param, UnionRule};
use crate::parallel;
use crate::scalar::{falling_factorial, Scalar, ScalarError};
use crate::structure::{canonical_form, count_embeddings, FiniteStructure, IsoClassId};

/// Rational values for named parameters.
pub type Specialization = BTreeMap<String, BigRational>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("the age is counting-only and carries no measure")]
    CountingOnly,
    #[error("more than one free parameter ({}); specialize all but one", .0.join(", "))]
    MultipleSymbols(Vec<String>),
    #[error(transparent)]
    Age(#[from] AgeError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone)]
enum Rule {
    Sets(Scalar),
    LinearOrders,
    FiniteModel(FiniteStructure),
    DisjointUnion(Vec<Rule>, UnionRule),
    TimesQ(Box<Rule>),
}

fn compile(spec: &AgeSpec, values: &HashMap<&str, Scalar>) -> Result<Rule, MeasureError> {
    Ok(match spec {
        AgeSpec::Sets { lambda } => Rule::Sets(match lambda {
            Param::Value(q) => Scalar::rational(q),
            Param::Symbol(name) => values[name.as_str()].clone(),
        }),
        AgeSpec::LinearOrders => Rule::LinearOrders,
        AgeSpec::FiniteModel(m) => Rule::FiniteModel(m.clone()),
        AgeSpec::DisjointUnion { components, rule } => Rule::DisjointUnion(
            components.iter().map(|c| compile(c, values)).collect::<Result<_, _>>()?,
            *rule,
        ),
        AgeSpec::TimesQ(inner) => Rule::TimesQ(Box::new(compile(inner, values)?)),
        AgeSpec::MultisetOver(_) => return Err(MeasureError::CountingOnly),
    })
}

fn sign(l: usize) -> Scalar {
    Scalar::int(if l.is_multiple_of(2) { 1 } else { -1 })
}

fn value_of(age: &Age, rule: &Rule, s: &FiniteStructure) -> Scalar {
    match (rule, age.node()) {
        (Rule::Sets(x), _) => falling_factorial(x, s.n()),
        (Rule::LinearOrders, _) => sign(s.n()),
        (Rule::FiniteModel(m), _) => {
            Scalar::from_bigint(BigInt::from(count_embeddings(s, m).expect("same signature")))
        }
        (Rule::DisjointUnion(parts, combine), Node::DisjointUnion { parts: ages, .. }) => {
            let sorts = age.sorts(s).expect("member");
            let values = parts.iter().zip(ages).enumerate().map(|(i, (r, a))| {
                value_of(a, r, &age.component_reduct(s, i, &sorts[i]))
            });
            match combine {
                UnionRule::Product => values.product(),
                UnionRule::Sum if s.n() == 0 => Scalar::one(),
                UnionRule::Sum => values.sum(),
            }
        }
        (Rule::TimesQ(inner), Node::TimesQ { inner: a, .. }) => {
            let blocks = age.blocks(s).expect("member");
            let prod: Scalar =
                blocks.iter().map(|b| value_of(a, inner, &age.component_reduct(s, 0, b))).product();
            sign(blocks.len()) * prod
        }
        _ => unreachable!("rule compiled from the age spec"),
    }
}

/// `nu(t) / nu(t minus its last vertex)`, by a route that never divides by
/// a value that might vanish under specialization (except for the additive
/// union rule, which has no such route).
fn ratio_of(age: &Age, rule: &Rule, t: &FiniteStructure) -> Result<Scalar, MeasureError> {
    let n = t.n();
    let last = n - 1;
    Ok(match (rule, age.node()) {
        (Rule::Sets(x), _) => x - &Scalar::int(last as i64),
        (Rule::LinearOrders, _) => Scalar::int(-1),
        (Rule::FiniteModel(_), _)
        | (Rule::DisjointUnion(_, UnionRule::Sum), _) => {
            let base = t.delete_vertex(last).expect("non-empty");
            value_of(age, rule, t).checked_div(&value_of(age, rule, &base))?
        }
        (Rule::DisjointUnion(parts, UnionRule::Product), Node::DisjointUnion { parts: ages, .. }) => {
            let sorts = age.sorts(t).expect("member");
            let i = sorts.iter().position(|vs| vs.last() == Some(&last)).expect("sorted vertex");
            ratio_of(&ages[i], &parts[i], &age.component_reduct(t, i, &sorts[i]))?
        }
        (Rule::TimesQ(inner), Node::TimesQ { inner: a, .. }) => {
            let blocks = age.blocks(t).expect("member");
            let block = blocks.iter().find(|b| b.contains(&last)).expect("covering blocks");
            let r = ratio_of(a, inner, &age.component_reduct(t, 0, block))?;
            if block.len() == 1 {
                -r
            } else {
                r
            }
        }
        _ => unreachable!("rule compiled from the age spec"),
    })
}

/// An R-measure on an age, with a grow-only memo of class values.
#[derive(Debug)]
pub struct Measure {
    age: Arc<Age>,
    rule: Rule,
    symbol: Option<String>,
    memo: RwLock<HashMap<IsoClassId, Scalar>>,
}

impl Measure {
    pub fn new(age: Arc<Age>, specialization: &Specialization) -> Result<Self, MeasureError> {
        if !age.has_measure() {
            return Err(MeasureError::CountingOnly);
        }
        let mut free: Vec<String> = Vec::new();
        for p in age.spec().params() {
            if let Param::Symbol(name) = p {
                if !specialization.contains_key(name) && !free.contains(name) {
                    free.push(name.clone());
                }
            }
        }
        if free.len() > 1 {
            return Err(MeasureError::MultipleSymbols(free));
        }
        let mut values: HashMap<&str, Scalar> =
            specialization.iter().map(|(k, q)| (k.as_str(), Scalar::rational(q))).collect();
        if let Some(name) = free.first() {
            values.insert(name, Scalar::lambda());
        }
        let rule = compile(age.spec(), &values)?;
        let symbol = free.into_iter().next();
        Ok(Measure { age, rule, symbol, memo: RwLock::new(HashMap::new()) })
    }

    /// Measure with every parameter left symbolic (at most one name).
    pub fn symbolic(age: Arc<Age>) -> Result<Self, MeasureError> {
        Self::new(age, &Specialization::new())
    }

    pub fn age(&self) -> &Arc<Age> {
        &self.age
    }

    /// Name of the parameter that `lambda` stands for, if any is free.
    pub fn symbol(&self) -> Option<&str> {
        self.symbol.as_deref()
    }

    pub fn value(&self, s: &FiniteStructure) -> Result<Scalar, MeasureError> {
        let id = canonical_form(s);
        if let Some(v) = self.memo.read().expect("memo lock").get(&id) {
            return Ok(v.clone());
        }
        if !self.age.contains(s)? {
            return Err(AgeError::NotMember.into());
        }
        let v = value_of(&self.age, &self.rule, s);
        self.memo.write().expect("memo lock").insert(id, v.clone());
        Ok(v)
    }

    /// `nu(assembled) / nu(base)` of a one-point extension.
    pub fn one_point_ratio(&self, ext: &OnePointExtension) -> Result<Scalar, MeasureError> {
        ratio_of(&self.age, &self.rule, ext.assembled())
    }

    /// `mu(X)`: the sum of `nu` over the one-point extensions of the empty structure.
    pub fn total_point_measure(&self) -> Result<Scalar, MeasureError> {
        let exts = self.age.one_point_extensions(&self.age.empty_structure())?;
        exts.iter().map(|e| self.value(e.assembled())).sum()
    }

    /// Checks `nu(s1) nu(s2) = nu(s0) sum nu(a)` over the one-point amalgams
    /// `a` of every pair of extensions of every base of size below
    /// `max_level`, and records every class found with value zero.
    pub fn verify_r_measure(&self, max_level: usize) -> Result<MeasureReport, MeasureError> {
        let bases: Vec<FiniteStructure> = match max_level {
            0 => Vec::new(),
            _ => {
                let levels = self.age.enumerate_levels(max_level - 1, None)?;
                levels.iter().flatten().map(|c| c.rep.clone()).collect()
            }
        };
        let per_base = parallel::try_map(&bases, |s0| self.check_base(s0))?;
        let mut report = MeasureReport { bases_checked: bases.len(), ..Default::default() };
        let mut zeros = BTreeMap::new();
        for part in per_base {
            report.pairs_checked += part.pairs_checked;
            report.violations.extend(part.violations);
            for z in part.zero_values {
                zeros.entry(z.class.clone()).or_insert(z);
            }
        }
        report.zero_values = zeros.into_values().collect();
        report.zero_values.sort_by(|a, b| (a.size, &a.class).cmp(&(b.size, &b.class)));
        Ok(report)
    }

    fn check_base(&self, s0: &FiniteStructure) -> Result<MeasureReport, MeasureError> {
        let mut report = MeasureReport::default();
        let note = |s: &FiniteStructure, v: &Scalar, report: &mut MeasureReport| {
            if v.is_zero() {
                report.zero_values.push(ZeroValue { class: canonical_form(s), size: s.n() });
            }
        };
        let v0 = self.value(s0)?;
        note(s0, &v0, &mut report);
        let exts = self.age.one_point_extensions(s0)?;
        let vals = exts.iter().map(|e| self.value(e.assembled())).collect::<Result<Vec<_>, _>>()?;
        for (e, v) in exts.iter().zip(&vals) {
            note(e.assembled(), v, &mut report);
        }
        for i in 0..exts.len() {
            for j in i..exts.len() {
                report.pairs_checked += 1;
                let amalgams = self.age.one_point_amalgamations(&exts[i], &exts[j])?;
                let mut sum = Scalar::zero();
                for a in &amalgams {
                    let v = self.value(&a.structure)?;
                    note(&a.structure, &v, &mut report);
                    sum += v;
                }
                let lhs = &vals[i] * &vals[j];
                let rhs = &v0 * &sum;
                if lhs != rhs {
                    report.violations.push(MeasureViolation {
                        base: s0.clone(),
                        ext1: exts[i].assembled().clone(),
                        ext2: exts[j].assembled().clone(),
                        lhs,
                        rhs,
                        amalgams: amalgams.into_iter().map(|a| a.structure).collect(),
                    });
                }
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureViolation {
    pub base: FiniteStructure,
    pub ext1: FiniteStructure,
    pub ext2: FiniteStructure,
    /// `nu(ext1) nu(ext2)`
    pub lhs: Scalar,
    /// `nu(base) sum nu(amalgam)`
    pub rhs: Scalar,
    pub amalgams: Vec<FiniteStructure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroValue {
    pub class: IsoClassId,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasureReport {
    pub bases_checked: usize,
    pub pairs_checked: usize,
    pub violations: Vec<MeasureViolation>,
    /// Classes met during the check whose value is zero, by size.
    pub zero_values: Vec<ZeroValue>,
}

impl MeasureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_regular(&self) -> bool {
        self.zero_values.is_empty()
    }

    pub fn smallest_zero_size(&self) -> Option<usize> {
        self.zero_values.first().map(|z| z.size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;

    fn complete(m: usize) -> FiniteStructure {
        let sig = Signature::new(["E"]).unwrap();
        let pairs = (0..m).flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (0, a, b)));
        FiniteStructure::from_pairs(sig, m, pairs).unwrap()
    }

    fn measure(spec: AgeSpec) -> Measure {
        Measure::symbolic(Arc::new(Age::new(spec).unwrap())).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn sets_values_are_falling_factorials() {
        let m = measure(AgeSpec::sets(Param::symbolic()));
        let s3 = FiniteStructure::new(m.age().signature().clone(), 3).unwrap();
        let l = Scalar::lambda();
        assert_eq!(m.value(&s3).unwrap(), &l * (&l - Scalar::one()) * (&l - Scalar::int(2)));
        assert_eq!(m.total_point_measure().unwrap(), l);
    }

    #[test]
    fn linear_order_chain() {
        let m = measure(AgeSpec::LinearOrders);
        let sig = m.age().signature().clone();
        let chain = FiniteStructure::from_pairs(sig, 3, [(0, 0, 1), (0, 1, 2), (0, 0, 2)]).unwrap();
        assert_eq!(m.value(&chain).unwrap(), Scalar::int(-1));
    }

    #[test]
    fn fibonacci_measure() {
        let m = measure(AgeSpec::times_q(AgeSpec::FiniteModel(complete(2))));
        assert_eq!(m.total_point_measure().unwrap(), Scalar::int(-2));
        let levels = m.age().enumerate_levels(4, None).unwrap();
        let c = levels.level(3).iter().find(|c| m.age().describe(&c.rep) == "[2,1]").unwrap();
        assert_eq!(m.value(&c.rep).unwrap(), Scalar::int(4));
        let c = levels.level(3).iter().find(|c| m.age().describe(&c.rep) == "[1,1,1]").unwrap();
        assert_eq!(m.value(&c.rep).unwrap(), Scalar::int(-8));
    }

    #[test]
    fn empty_structure_has_measure_one() {
        for spec in [
            AgeSpec::sets(Param::symbolic()),
            AgeSpec::LinearOrders,
            AgeSpec::FiniteModel(complete(3)),
            AgeSpec::times_q(AgeSpec::LinearOrders),
            AgeSpec::DisjointUnion {
                components: vec![AgeSpec::LinearOrders, AgeSpec::sets(Param::symbolic())],
                rule: UnionRule::Sum,
            },
        ] {
            let m = measure(spec);
            assert!(m.value(&m.age().empty_structure()).unwrap().is_one());
        }
    }

    #[test]
    fn two_parameters_need_a_specialization() {
        let age = Arc::new(
            Age::new(AgeSpec::disjoint_union(vec![
                AgeSpec::sets(Param::Symbol("l1".into())),
                AgeSpec::sets(Param::Symbol("l2".into())),
            ]))
            .unwrap(),
        );
        assert!(matches!(Measure::symbolic(age.clone()), Err(MeasureError::MultipleSymbols(_))));
        let spec: Specialization = [("l2".to_string(), q(5))].into();
        let m = Measure::new(age, &spec).unwrap();
        assert_eq!(m.symbol(), Some("l1"));
        assert_eq!(m.total_point_measure().unwrap(), Scalar::lambda() + Scalar::int(5));
    }

    #[test]
    fn counting_only_age_has_no_measure() {
        let age = Arc::new(Age::new(AgeSpec::multiset_over(AgeSpec::LinearOrders)).unwrap());
        assert!(matches!(Measure::symbolic(age), Err(MeasureError::CountingOnly)));
    }

    #[test]
    fn ratio_matches_quotient() {
        for spec in [
            AgeSpec::sets(Param::symbolic()),
            AgeSpec::times_q(AgeSpec::FiniteModel(complete(2))),
            AgeSpec::disjoint_union(vec![AgeSpec::FiniteModel(complete(2)), AgeSpec::sets(Param::symbolic())]),
            AgeSpec::times_q(AgeSpec::sets(Param::symbolic())),
        ] {
            let m = measure(spec);
            for c in m.age().enumerate_levels(3, None).unwrap().iter().flatten() {
                for e in m.age().one_point_extensions(&c.rep).unwrap() {
                    let quotient =
                        m.value(e.assembled()).unwrap().checked_div(&m.value(e.base()).unwrap()).unwrap();
                    assert_eq!(m.one_point_ratio(&e).unwrap(), quotient);
                }
            }
        }
    }

    #[test]
    fn axioms_hold_for_sets_and_orders() {
        for spec in [AgeSpec::sets(Param::symbolic()), AgeSpec::LinearOrders] {
            let r = measure(spec).verify_r_measure(4).unwrap();
            assert!(r.passed() && r.is_regular(), "{r:?}");
            assert!(r.pairs_checked > 0);
        }
    }

    #[test]
    fn additive_union_rule_fails() {
        let age = Arc::new(
            Age::new(AgeSpec::DisjointUnion {
                components: vec![
                    AgeSpec::sets(Param::Symbol("l1".into())),
                    AgeSpec::sets(Param::Symbol("l2".into())),
                ],
                rule: UnionRule::Sum,
            })
            .unwrap(),
        );
        let spec: Specialization = [("l2".to_string(), q(7))].into();
        let r = Measure::new(age, &spec).unwrap().verify_r_measure(1).unwrap();
        let l = Scalar::lambda();
        let witness = r
            .violations
            .iter()
            .find(|v| v.rhs == &l + Scalar::int(7))
            .expect("mixed-sort witness");
        assert_eq!(witness.lhs, (&l + Scalar::one()) * Scalar::int(8));
    }

    #[test]
    fn specialized_sets_become_irregular_at_four() {
        let age = Arc::new(Age::new(AgeSpec::sets(Param::symbolic())).unwrap());
        let spec: Specialization = [("lambda".to_string(), q(3))].into();
        let r = Measure::new(age, &spec).unwrap().verify_r_measure(5).unwrap();
        assert!(r.passed());
        assert_eq!(r.smallest_zero_size(), Some(4));
    }
}
