//! Ages: amalgamation classes of finite structures.
//!
//! An [`AgeSpec`] is a declarative description built from a few base ages
//! and combinators; [`Age::new`] compiles it into a membership oracle over
//! a concrete [`Signature`] together with a generative one-point extension
//! rule. Level enumeration uses the generative rule and checks every result
//! against the oracle, so a combinator bug surfaces as
//! [`AgeError::OracleDisagreement`] rather than a wrong count.
//!
//! Signatures of combinators:
//!
//! * `DisjointUnion(A1..Ak)`: loop relations `sort1..sortk` marking the
//!   component of each vertex, then the relations of component `i` renamed
//!   `i.name` (components are numbered from 1).
//! * `TimesQ(A)`: the relations of `A` followed by a strict weak order
//!   `order` whose incomparability classes are the blocks.
//! * `MultisetOver(A)`: the relations of `A` followed by an equivalence
//!   relation `eq` (reflexive, loops included) whose classes are the blocks.
//!
//! Fresh names get `'` appended until they do not clash.

mod describe;
mod enumerate;
mod extend;
mod homogeneity;

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::structure::{for_each_embedding, FiniteStructure, IsoClassId, Signature, StructureError};

pub use enumerate::{Class, Levels};
pub use extend::{Amalgam, OnePointExtension};
pub use homogeneity::{check_homogeneity_finite_model, HomogeneityReport, Unliftable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AgeError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("structure signature does not match the age signature")]
    SignatureMismatch,
    #[error("structure is not a member of the age")]
    NotMember,
    #[error("a disjoint union needs at least one component")]
    EmptyUnion,
    #[error("signature has {0} relations, at most 32 are supported")]
    TooManyRelations(usize),
    #[error("invalid measure parameter `{0}`")]
    BadParam(String),
    #[error("one-point extensions have different bases")]
    DifferentBases,
    #[error("generated structure rejected by the membership oracle: {0:?}")]
    OracleDisagreement(Box<FiniteStructure>),
    #[error("level {level} has at least {size} classes, over the cap of {cap}")]
    CapExceeded { level: usize, size: usize, cap: usize, partial: Box<Levels> },
}

/// Measure parameter of a [`AgeSpec::Sets`] component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Param {
    /// A named indeterminate.
    Symbol(String),
    Value(BigRational),
}

impl Param {
    /// The default indeterminate `lambda`.
    pub fn symbolic() -> Self {
        Param::Symbol(crate::scalar::VAR.to_string())
    }
}

/// `"symbolic"` is the default indeterminate, a rational literal such as
/// `7/2` or `-3` is a value, any other identifier names an indeterminate.
impl FromStr for Param {
    type Err = AgeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        if t == "symbolic" {
            return Ok(Param::symbolic());
        }
        if let Ok(q) = t.parse::<BigRational>() {
            return Ok(Param::Value(q));
        }
        let mut chars = t.chars();
        let ident = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if ident {
            Ok(Param::Symbol(t.to_string()))
        } else {
            Err(AgeError::BadParam(text.to_string()))
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Symbol(s) => f.write_str(s),
            Param::Value(q) => write!(f, "{q}"),
        }
    }
}

/// How a disjoint union combines the measures of its components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UnionRule {
    /// `nu(s) = prod nu_i(s_i)`; this is an R-measure.
    #[default]
    Product,
    /// `nu(s) = sum nu_i(s_i)` on non-empty `s`, `nu(empty) = 1`. Kept to
    /// exhibit the amalgamation failure of the additive rule.
    Sum,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AgeSpec {
    /// Finite sets; measure `lambda (lambda - 1) ... (lambda - n + 1)`.
    Sets { lambda: Param },
    /// Finite linear orders; measure `(-1)^n`.
    LinearOrders,
    /// Substructures of a fixed finite model; measure counts embeddings.
    FiniteModel(FiniteStructure),
    DisjointUnion { components: Vec<AgeSpec>, rule: UnionRule },
    /// Ordered tuples of non-empty members of the inner age.
    TimesQ(Box<AgeSpec>),
    /// Finite multisets of non-empty members; counting only.
    MultisetOver(Box<AgeSpec>),
}

impl AgeSpec {
    pub fn sets(lambda: Param) -> Self {
        AgeSpec::Sets { lambda }
    }

    pub fn disjoint_union(components: Vec<AgeSpec>) -> Self {
        AgeSpec::DisjointUnion { components, rule: UnionRule::Product }
    }

    /// `m` disjoint copies of `a`.
    pub fn colored(a: AgeSpec, m: usize) -> Self {
        Self::disjoint_union(vec![a; m])
    }

    pub fn times_q(a: AgeSpec) -> Self {
        AgeSpec::TimesQ(Box::new(a))
    }

    pub fn multiset_over(a: AgeSpec) -> Self {
        AgeSpec::MultisetOver(Box::new(a))
    }

    /// Whether the underlying homogeneous structure is infinite.
    pub fn is_infinite(&self) -> bool {
        match self {
            AgeSpec::Sets { .. } | AgeSpec::LinearOrders => true,
            AgeSpec::FiniteModel(_) => false,
            AgeSpec::DisjointUnion { components, .. } => components.iter().any(Self::is_infinite),
            AgeSpec::TimesQ(_) | AgeSpec::MultisetOver(_) => true,
        }
    }

    pub fn has_measure(&self) -> bool {
        match self {
            AgeSpec::Sets { .. } | AgeSpec::LinearOrders | AgeSpec::FiniteModel(_) => true,
            AgeSpec::DisjointUnion { components, .. } => components.iter().all(Self::has_measure),
            AgeSpec::TimesQ(inner) => inner.has_measure(),
            AgeSpec::MultisetOver(_) => false,
        }
    }

    /// Parameters of all `Sets` components, in depth-first order.
    pub fn params(&self) -> Vec<&Param> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params<'a>(&'a self, out: &mut Vec<&'a Param>) {
        match self {
            AgeSpec::Sets { lambda } => out.push(lambda),
            AgeSpec::LinearOrders | AgeSpec::FiniteModel(_) => {}
            AgeSpec::DisjointUnion { components, .. } => {
                components.iter().for_each(|c| c.collect_params(out))
            }
            AgeSpec::TimesQ(inner) | AgeSpec::MultisetOver(inner) => inner.collect_params(out),
        }
    }
}

/// A compiled age.
#[derive(Debug, Clone)]
pub struct Age {
    spec: AgeSpec,
    sig: Arc<Signature>,
    node: Node,
}

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Sets,
    LinearOrders,
    FiniteModel { model: FiniteStructure, labels: Option<HashMap<IsoClassId, String>> },
    /// Sort relation `i` has index `i`; component `i` starts at `offsets[i]`.
    DisjointUnion { parts: Vec<Age>, offsets: Vec<usize> },
    /// Inner relations come first, `order` is the last index.
    TimesQ { inner: Box<Age>, order: usize },
    MultisetOver { inner: Box<Age>, eq: usize },
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

impl Age {
    pub fn new(spec: AgeSpec) -> Result<Self, AgeError> {
        let (sig, node) = match &spec {
            AgeSpec::Sets { .. } => (Signature::empty(), Node::Sets),
            AgeSpec::LinearOrders => (Signature::new(["<"])?, Node::LinearOrders),
            AgeSpec::FiniteModel(m) => {
                let labels = describe::model_labels(m);
                (m.signature().clone(), Node::FiniteModel { model: m.clone(), labels })
            }
            AgeSpec::DisjointUnion { components, .. } => {
                if components.is_empty() {
                    return Err(AgeError::EmptyUnion);
                }
                let parts = components.iter().cloned().map(Age::new).collect::<Result<Vec<_>, _>>()?;
                let mut names: Vec<String> = (1..=parts.len()).map(|i| format!("sort{i}")).collect();
                let mut offsets = Vec::with_capacity(parts.len());
                for (i, p) in parts.iter().enumerate() {
                    offsets.push(names.len());
                    names.extend(p.sig.symbols().iter().map(|s| format!("{}.{s}", i + 1)));
                }
                (Signature::new(names)?, Node::DisjointUnion { parts, offsets })
            }
            AgeSpec::TimesQ(inner) => {
                let inner = Age::new((**inner).clone())?;
                let mut names = inner.sig.symbols().to_vec();
                let order = names.len();
                names.push(fresh("order", &names));
                (Signature::new(names)?, Node::TimesQ { inner: Box::new(inner), order })
            }
            AgeSpec::MultisetOver(inner) => {
                let inner = Age::new((**inner).clone())?;
                let mut names = inner.sig.symbols().to_vec();
                let eq = names.len();
                names.push(fresh("eq", &names));
                (Signature::new(names)?, Node::MultisetOver { inner: Box::new(inner), eq })
            }
        };
        if sig.len() > 32 {
            return Err(AgeError::TooManyRelations(sig.len()));
        }
        Ok(Age { spec, sig, node })
    }

    pub fn spec(&self) -> &AgeSpec {
        &self.spec
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn is_infinite(&self) -> bool {
        self.spec.is_infinite()
    }

    pub fn has_measure(&self) -> bool {
        self.spec.has_measure()
    }

    pub(crate) fn node(&self) -> &Node {
        &self.node
    }

    pub fn empty_structure(&self) -> FiniteStructure {
        FiniteStructure::empty(self.sig.clone())
    }

    fn check_signature(&self, s: &FiniteStructure) -> Result<(), AgeError> {
        if **s.signature() == *self.sig {
            Ok(())
        } else {
            Err(AgeError::SignatureMismatch)
        }
    }

    /// Membership oracle.
    pub fn contains(&self, s: &FiniteStructure) -> Result<bool, AgeError> {
        self.check_signature(s)?;
        Ok(self.member(s))
    }

    /// Membership for a structure already known to have the right signature.
    pub(crate) fn member(&self, s: &FiniteStructure) -> bool {
        match &self.node {
            Node::Sets => true,
            Node::LinearOrders => is_strict_total_order(s, 0),
            Node::FiniteModel { model, .. } => {
                let mut found = false;
                for_each_embedding(s, model, |_| {
                    found = true;
                    ControlFlow::Break(())
                })
                .expect("signatures agree");
                found
            }
            Node::DisjointUnion { parts, offsets, .. } => {
                let Some(sorts) = sort_classes(s, parts.len()) else {
                    return false;
                };
                // component relations may not cross sorts
                let mut sort_of = vec![0; s.n()];
                for (i, vs) in sorts.iter().enumerate() {
                    vs.iter().for_each(|&v| sort_of[v] = i);
                }
                for (i, part) in parts.iter().enumerate() {
                    for r in offsets[i]..offsets[i] + part.sig.len() {
                        if s.pairs(r).iter().any(|&(a, b)| sort_of[a] != i || sort_of[b] != i) {
                            return false;
                        }
                    }
                }
                parts
                    .iter()
                    .enumerate()
                    .all(|(i, p)| p.member(&s.reduct(&sorts[i], offsets[i], &p.sig)))
            }
            Node::TimesQ { inner, order } => match weak_order_blocks(s, *order) {
                Some(blocks) => blocks_are_members(s, &blocks, inner),
                None => false,
            },
            Node::MultisetOver { inner, eq } => match equivalence_blocks(s, *eq) {
                Some(blocks) => blocks_are_members(s, &blocks, inner),
                None => false,
            },
        }
    }

    /// Blocks of a `TimesQ` member in order, or of a `MultisetOver` member
    /// by smallest vertex. `None` for other ages or non-members.
    pub fn blocks(&self, s: &FiniteStructure) -> Option<Vec<Vec<usize>>> {
        match &self.node {
            Node::TimesQ { order, .. } => weak_order_blocks(s, *order),
            Node::MultisetOver { eq, .. } => equivalence_blocks(s, *eq),
            _ => None,
        }
    }

    /// Vertices of each sort of a `DisjointUnion` member.
    pub fn sorts(&self, s: &FiniteStructure) -> Option<Vec<Vec<usize>>> {
        match &self.node {
            Node::DisjointUnion { parts, .. } => sort_classes(s, parts.len()),
            _ => None,
        }
    }

    /// Component (inner) age of a combinator.
    pub fn components(&self) -> Vec<&Age> {
        match &self.node {
            Node::DisjointUnion { parts, .. } => parts.iter().collect(),
            Node::TimesQ { inner, .. } | Node::MultisetOver { inner, .. } => vec![inner],
            _ => Vec::new(),
        }
    }

    /// Reduct of `s` to component `i` on `vertices`.
    pub(crate) fn component_reduct(&self, s: &FiniteStructure, i: usize, vertices: &[usize]) -> FiniteStructure {
        match &self.node {
            Node::DisjointUnion { parts, offsets, .. } => s.reduct(vertices, offsets[i], &parts[i].sig),
            Node::TimesQ { inner, .. } | Node::MultisetOver { inner, .. } => {
                s.reduct(vertices, 0, &inner.sig)
            }
            _ => panic!("component reduct of a base age"),
        }
    }
}

fn is_strict_total_order(s: &FiniteStructure, r: usize) -> bool {
    let n = s.n();
    for a in 0..n {
        if s.has(r, a, a) {
            return false;
        }
        for b in 0..n {
            if a != b && s.has(r, a, b) == s.has(r, b, a) {
                return false;
            }
        }
    }
    (0..n).all(|a| (0..n).all(|b| !s.has(r, a, b) || (0..n).all(|c| !s.has(r, b, c) || s.has(r, a, c))))
}

/// Blocks of a strict weak order, ordered upwards; vertices ascending.
fn weak_order_blocks(s: &FiniteStructure, r: usize) -> Option<Vec<Vec<usize>>> {
    let n = s.n();
    for a in 0..n {
        if s.has(r, a, a) {
            return None;
        }
        for b in 0..n {
            if s.has(r, a, b) && s.has(r, b, a) {
                return None;
            }
            for c in 0..n {
                if s.has(r, a, b) && s.has(r, b, c) && !s.has(r, a, c) {
                    return None;
                }
                let inc = |x: usize, y: usize| x == y || (!s.has(r, x, y) && !s.has(r, y, x));
                if inc(a, b) && inc(b, c) && !inc(a, c) {
                    return None;
                }
            }
        }
    }
    // in a strict weak order the blocks are the classes of equal down-sets
    let mut by_rank: Vec<(usize, usize)> =
        (0..n).map(|v| ((0..n).filter(|&u| s.has(r, u, v)).count(), v)).collect();
    by_rank.sort_unstable();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut last = None;
    for (rank, v) in by_rank {
        if last == Some(rank) {
            blocks.last_mut().unwrap().push(v);
        } else {
            blocks.push(vec![v]);
            last = Some(rank);
        }
    }
    Some(blocks)
}

/// Classes of a reflexive equivalence relation, ordered by smallest vertex.
fn equivalence_blocks(s: &FiniteStructure, r: usize) -> Option<Vec<Vec<usize>>> {
    let n = s.n();
    for a in 0..n {
        if !s.has(r, a, a) {
            return None;
        }
        for b in 0..n {
            if s.has(r, a, b) != s.has(r, b, a) {
                return None;
            }
            if s.has(r, a, b) && (0..n).any(|c| s.has(r, b, c) && !s.has(r, a, c)) {
                return None;
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut seen = 0u64;
    for a in 0..n {
        if seen >> a & 1 == 0 {
            let block: Vec<usize> = (a..n).filter(|&b| s.has(r, a, b)).collect();
            block.iter().for_each(|&b| seen |= 1 << b);
            blocks.push(block);
        }
    }
    Some(blocks)
}

/// Vertices per sort when every vertex carries exactly one sort loop and
/// sort relations have no other pairs.
fn sort_classes(s: &FiniteStructure, k: usize) -> Option<Vec<Vec<usize>>> {
    let mut sorts = vec![Vec::new(); k];
    for v in 0..s.n() {
        let mut sort = None;
        for (r, class) in sorts.iter_mut().enumerate() {
            if s.row(r, v) & !(1 << v) != 0 {
                return None;
            }
            if s.has(r, v, v) {
                if sort.is_some() {
                    return None;
                }
                sort = Some(r);
                class.push(v);
            }
        }
        sort?;
    }
    Some(sorts)
}

/// Inner relations stay inside blocks and every block reduct is in `inner`.
fn blocks_are_members(s: &FiniteStructure, blocks: &[Vec<usize>], inner: &Age) -> bool {
    let mut block_of = vec![0; s.n()];
    for (i, b) in blocks.iter().enumerate() {
        b.iter().for_each(|&v| block_of[v] = i);
    }
    for r in 0..inner.sig.len() {
        if s.pairs(r).iter().any(|&(a, b)| block_of[a] != block_of[b]) {
            return false;
        }
    }
    blocks.iter().all(|b| inner.member(&s.reduct(b, 0, &inner.sig)))
}

#[cfg(test)]
mod tests;
