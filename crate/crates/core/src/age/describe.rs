//! Compact human-readable class descriptors.
//!
//! `∅` for the empty structure; the vertex count for sets and orders;
//! `n` or `n#k` (k-th class of that size) for substructures of a model;
//! `(d1|d2|...)` per sort of a disjoint union; `[d1,d2,...]` for the
//! ordered blocks of a `TimesQ` member; `{d1,d2,...}` for the blocks of a
//! multiset, sorted.

use std::collections::{BTreeSet, HashMap};

use super::{Age, Node};
use crate::structure::{canonical_form, FiniteStructure, IsoClassId};

const MAX_LABELLED_MODEL: usize = 16;

pub(super) fn model_labels(m: &FiniteStructure) -> Option<HashMap<IsoClassId, String>> {
    if m.n() > MAX_LABELLED_MODEL {
        return None;
    }
    let n = m.n();
    let mut by_size = vec![BTreeSet::new(); n + 1];
    for mask in 0..1u64 << n {
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        by_size[verts.len()].insert(canonical_form(&m.induced_ordered(&verts).expect("in range")));
    }
    let mut labels = HashMap::new();
    for (size, ids) in by_size.into_iter().enumerate() {
        let unique = ids.len() == 1;
        for (k, id) in ids.into_iter().enumerate() {
            let label = if unique { size.to_string() } else { format!("{size}#{}", k + 1) };
            labels.insert(id, label);
        }
    }
    Some(labels)
}

impl Age {
    pub fn describe(&self, s: &FiniteStructure) -> String {
        if s.n() == 0 {
            return "∅".to_string();
        }
        match &self.node {
            Node::Sets | Node::LinearOrders => s.n().to_string(),
            Node::FiniteModel { labels, .. } => {
                let id = canonical_form(s);
                match labels.as_ref().and_then(|l| l.get(&id)) {
                    Some(label) => label.clone(),
                    None => format!("{}:{}", s.n(), id.to_hex()),
                }
            }
            Node::DisjointUnion { parts, offsets, .. } => {
                let sorts = self.sorts(s).expect("member");
                let inner: Vec<String> = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.describe(&s.reduct(&sorts[i], offsets[i], &p.sig)))
                    .collect();
                format!("({})", inner.join("|"))
            }
            Node::TimesQ { inner, .. } => {
                let blocks = self.blocks(s).expect("member");
                let parts: Vec<String> =
                    blocks.iter().map(|b| inner.describe(&s.reduct(b, 0, &inner.sig))).collect();
                format!("[{}]", parts.join(","))
            }
            Node::MultisetOver { inner, .. } => {
                let blocks = self.blocks(s).expect("member");
                let mut parts: Vec<String> =
                    blocks.iter().map(|b| inner.describe(&s.reduct(b, 0, &inner.sig))).collect();
                parts.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| b.cmp(a)));
                format!("{{{}}}", parts.join(","))
            }
        }
    }
}
