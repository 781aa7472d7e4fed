//! Level-by-level enumeration of isomorphism classes.

use std::collections::BTreeMap;

use super::{Age, AgeError};
use crate::parallel;
use crate::structure::{canonical_labeling, FiniteStructure, IsoClassId};

/// An isomorphism class with its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub id: IsoClassId,
    pub rep: FiniteStructure,
}

impl Class {
    pub fn of(s: &FiniteStructure) -> Self {
        let (id, perm) = canonical_labeling(s, None);
        Class { id, rep: s.relabel(&perm) }
    }
}

/// Classes of levels `0..=N`, each level sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Levels {
    levels: Vec<Vec<Class>>,
}

impl Levels {
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Number of levels stored (the top level is `len() - 1`).
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, n: usize) -> &[Class] {
        self.levels.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Class]> {
        self.levels.iter().map(Vec::as_slice)
    }

    pub fn index_of(&self, n: usize, id: &IsoClassId) -> Option<usize> {
        self.level(n).binary_search_by(|c| c.id.cmp(id)).ok()
    }
}

impl Age {
    /// Classes of every level `0..=max_level`, computed as the canonical
    /// one-point extensions of the level below. With `cap`, a level larger
    /// than the cap stops the run; the error carries the levels completed.
    pub fn enumerate_levels(&self, max_level: usize, cap: Option<usize>) -> Result<Levels, AgeError> {
        let mut levels = Levels { levels: vec![vec![Class::of(&self.empty_structure())]] };
        for n in 1..=max_level {
            let next = self.next_level(levels.level(n - 1))?;
            if let Some(cap) = cap.filter(|&c| next.len() > c) {
                return Err(AgeError::CapExceeded {
                    level: n,
                    size: next.len(),
                    cap,
                    partial: Box::new(levels),
                });
            }
            levels.levels.push(next);
        }
        Ok(levels)
    }

    fn next_level(&self, parents: &[Class]) -> Result<Vec<Class>, AgeError> {
        let children = parallel::try_map(parents, |p| {
            let exts = self.one_point_extensions(&p.rep)?;
            Ok::<_, AgeError>(exts.iter().map(|e| Class::of(e.assembled())).collect::<Vec<_>>())
        })?;
        let merged: BTreeMap<IsoClassId, FiniteStructure> =
            children.into_iter().flatten().map(|c| (c.id, c.rep)).collect();
        Ok(merged.into_iter().map(|(id, rep)| Class { id, rep }).collect())
    }
}
