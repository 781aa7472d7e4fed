//! One-point extensions and one-point amalgamations.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::{Age, AgeError, Node};
use crate::structure::{for_each_embedding, FiniteStructure};

/// A member `s` of an age together with one new vertex, stored as the
/// assembled structure whose last vertex is the new one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OnePointExtension {
    base: FiniteStructure,
    assembled: FiniteStructure,
}

impl OnePointExtension {
    pub fn base(&self) -> &FiniteStructure {
        &self.base
    }

    pub fn assembled(&self) -> &FiniteStructure {
        &self.assembled
    }

    pub fn new_vertex(&self) -> usize {
        self.base.n()
    }

    /// Per relation, the pairs that involve the new vertex.
    pub fn assignment(&self) -> Vec<Vec<(usize, usize)>> {
        let y = self.new_vertex();
        (0..self.assembled.num_relations())
            .map(|r| {
                self.assembled.pairs(r).into_iter().filter(|&(a, b)| a == y || b == y).collect()
            })
            .collect()
    }
}

/// An amalgam of two one-point extensions of `s0` (on vertices `0..n`).
///
/// `j1` and `j2` map the vertices of the two assembled extensions into
/// `structure`; both fix `0..n`, and the new vertices go to `n` and `n + 1`
/// unless they are identified, in which case both go to `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Amalgam {
    pub structure: FiniteStructure,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
}

impl Amalgam {
    pub fn is_identified(&self) -> bool {
        self.j1.last() == self.j2.last()
    }
}

impl Age {
    /// All one-point extensions of a member `s`, sorted, without repeats.
    pub fn one_point_extensions(&self, s: &FiniteStructure) -> Result<Vec<OnePointExtension>, AgeError> {
        self.check_signature(s)?;
        if !self.member(s) {
            return Err(AgeError::NotMember);
        }
        let mut raw = self.raw_extensions(s);
        raw.sort_unstable();
        raw.dedup();
        raw.into_iter()
            .map(|assembled| {
                if self.member(&assembled) {
                    Ok(OnePointExtension { base: s.clone(), assembled })
                } else {
                    Err(AgeError::OracleDisagreement(Box::new(assembled)))
                }
            })
            .collect()
    }

    /// Generative rule: assembled structures (new vertex last), possibly repeated.
    pub(crate) fn raw_extensions(&self, s: &FiniteStructure) -> Vec<FiniteStructure> {
        let n = s.n();
        match &self.node {
            Node::Sets => vec![s.with_new_vertex().expect("room for a vertex")],
            Node::LinearOrders => {
                let below: Vec<usize> = (0..n).map(|v| (0..n).filter(|&u| s.has(0, u, v)).count()).collect();
                (0..=n)
                    .map(|slot| {
                        let mut t = s.with_new_vertex().expect("room for a vertex");
                        for (u, &rank) in below.iter().enumerate() {
                            if rank < slot {
                                t.set(0, u, n, true);
                            } else {
                                t.set(0, n, u, true);
                            }
                        }
                        t
                    })
                    .collect()
            }
            Node::FiniteModel { model, .. } => {
                let mut out = BTreeSet::new();
                for_each_embedding(s, model, |phi| {
                    let mut image = phi.to_vec();
                    for m in (0..model.n()).filter(|m| !phi.contains(m)) {
                        image.push(m);
                        out.insert(model.induced_ordered(&image).expect("in range"));
                        image.pop();
                    }
                    ControlFlow::Continue(())
                })
                .expect("signatures agree");
                out.into_iter().collect()
            }
            Node::DisjointUnion { parts, offsets, .. } => {
                let sorts = super::sort_classes(s, parts.len()).expect("member");
                let mut out = Vec::new();
                for (i, part) in parts.iter().enumerate() {
                    let reduct = s.reduct(&sorts[i], offsets[i], &part.sig);
                    let mut map = sorts[i].clone();
                    map.push(n);
                    for ext in part.raw_extensions(&reduct) {
                        let mut t = s.with_new_vertex().expect("room for a vertex");
                        t.set(i, n, n, true);
                        t.copy_relations_from(&ext, offsets[i], &map);
                        out.push(t);
                    }
                }
                out
            }
            Node::TimesQ { inner, order } => {
                let blocks = super::weak_order_blocks(s, *order).expect("member");
                let mut out = Vec::new();
                let place = |t: &mut FiniteStructure, below: &[Vec<usize>], above: &[Vec<usize>]| {
                    below.iter().flatten().for_each(|&u| t.set(*order, u, n, true));
                    above.iter().flatten().for_each(|&u| t.set(*order, n, u, true));
                };
                for (j, block) in blocks.iter().enumerate() {
                    let reduct = s.reduct(block, 0, &inner.sig);
                    let mut map = block.clone();
                    map.push(n);
                    for ext in inner.raw_extensions(&reduct) {
                        let mut t = s.with_new_vertex().expect("room for a vertex");
                        t.copy_relations_from(&ext, 0, &map);
                        place(&mut t, &blocks[..j], &blocks[j + 1..]);
                        out.push(t);
                    }
                }
                let points = inner.raw_extensions(&inner.empty_structure());
                for gap in 0..=blocks.len() {
                    for p in &points {
                        let mut t = s.with_new_vertex().expect("room for a vertex");
                        t.copy_relations_from(p, 0, &[n]);
                        place(&mut t, &blocks[..gap], &blocks[gap..]);
                        out.push(t);
                    }
                }
                out
            }
            Node::MultisetOver { inner, eq } => {
                let blocks = super::equivalence_blocks(s, *eq).expect("member");
                let mut out = Vec::new();
                for block in &blocks {
                    let reduct = s.reduct(block, 0, &inner.sig);
                    let mut map = block.clone();
                    map.push(n);
                    for ext in inner.raw_extensions(&reduct) {
                        let mut t = s.with_new_vertex().expect("room for a vertex");
                        t.copy_relations_from(&ext, 0, &map);
                        t.set(*eq, n, n, true);
                        for &u in block {
                            t.set(*eq, u, n, true);
                            t.set(*eq, n, u, true);
                        }
                        out.push(t);
                    }
                }
                for p in inner.raw_extensions(&inner.empty_structure()) {
                    let mut t = s.with_new_vertex().expect("room for a vertex");
                    t.copy_relations_from(&p, 0, &[n]);
                    t.set(*eq, n, n, true);
                    out.push(t);
                }
                out
            }
        }
    }

    /// All one-point amalgams of two extensions of the same base: the
    /// identified amalgam when the extensions coincide, and every choice of
    /// relations between the two new vertices that stays in the age.
    /// Amalgams with different structures are distinct, since a compatible
    /// isomorphism must fix every vertex.
    pub fn one_point_amalgamations(
        &self,
        e1: &OnePointExtension,
        e2: &OnePointExtension,
    ) -> Result<Vec<Amalgam>, AgeError> {
        if e1.base != e2.base {
            return Err(AgeError::DifferentBases);
        }
        self.check_signature(&e1.base)?;
        let n = e1.base.n();
        let ident: Vec<usize> = (0..=n).collect();
        let mut out = Vec::new();
        if e1.assembled == e2.assembled {
            out.push(Amalgam { structure: e1.assembled.clone(), j1: ident.clone(), j2: ident.clone() });
        }
        let (y1, y2) = (n, n + 1);
        let mut base = e1.assembled.with_new_vertex()?;
        let k = self.sig.len();
        for r in 0..k {
            for u in 0..n {
                base.set(r, u, y2, e2.assembled.has(r, u, n));
                base.set(r, y2, u, e2.assembled.has(r, n, u));
            }
            base.set(r, y2, y2, e2.assembled.has(r, n, n));
        }
        let mut j2: Vec<usize> = (0..n).collect();
        j2.push(y2);
        for bits in 0u64..1 << (2 * k) {
            let mut t = base.clone();
            for r in 0..k {
                t.set(r, y1, y2, bits >> (2 * r) & 1 == 1);
                t.set(r, y2, y1, bits >> (2 * r + 1) & 1 == 1);
            }
            if self.member(&t) {
                out.push(Amalgam { structure: t, j1: ident.clone(), j2: j2.clone() });
            }
        }
        Ok(out)
    }
}
