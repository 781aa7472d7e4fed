//! Exhaustive homogeneity check for small finite models.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::structure::{canonical_form, for_each_embedding, FiniteStructure};

/// Two embeddings of `sub` into the model that no automorphism relates;
/// `embedding2 ∘ embedding1⁻¹` is then an unliftable partial isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unliftable {
    pub sub: FiniteStructure,
    pub embedding1: Vec<usize>,
    pub embedding2: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub classes_checked: usize,
    pub automorphisms: usize,
    pub counterexample: Option<Unliftable>,
}

impl HomogeneityReport {
    pub fn is_homogeneous(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn all_embeddings(s: &FiniteStructure, t: &FiniteStructure) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_embedding(s, t, |phi| {
        out.push(phi.to_vec());
        ControlFlow::Continue(())
    })
    .expect("same signature");
    out
}

/// Checks that every isomorphism between induced substructures of `m`
/// extends to an automorphism. For each class one embedding serves as the
/// reference; all others must be automorphic images of it, which covers
/// every pair because automorphisms form a group.
pub fn check_homogeneity_finite_model(m: &FiniteStructure) -> HomogeneityReport {
    let auts = all_embeddings(m, m);
    let n = m.n();
    let mut seen = BTreeSet::new();
    let mut subsets: Vec<u64> = (0..1u64 << n).collect();
    subsets.sort_by_key(|mask| (mask.count_ones(), *mask));
    for mask in subsets {
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let sub = m.induced_ordered(&verts).expect("in range");
        if !seen.insert(canonical_form(&sub)) {
            continue;
        }
        let embs = all_embeddings(&sub, m);
        let reference = &embs[0];
        for phi in &embs[1..] {
            let lifts = auts.iter().any(|a| reference.iter().zip(phi).all(|(&x, &y)| a[x] == y));
            if !lifts {
                return HomogeneityReport {
                    classes_checked: seen.len(),
                    automorphisms: auts.len(),
                    counterexample: Some(Unliftable {
                        sub,
                        embedding1: reference.clone(),
                        embedding2: phi.clone(),
                    }),
                };
            }
        }
    }
    HomogeneityReport { classes_checked: seen.len(), automorphisms: auts.len(), counterexample: None }
}
