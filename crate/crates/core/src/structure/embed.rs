//! Embedding enumeration by backtracking.

use std::ops::ControlFlow;

use super::{FiniteStructure, StructureError};

/// Calls `f` with every embedding `s -> t` (as the vertex map `map[v]`).
/// Stops early when `f` breaks.
pub fn for_each_embedding(
    s: &FiniteStructure,
    t: &FiniteStructure,
    mut f: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<(), StructureError> {
    if s.signature() != t.signature() {
        return Err(StructureError::SignatureMismatch);
    }
    if s.n() > t.n() {
        return Ok(());
    }
    let mut map = Vec::with_capacity(s.n());
    let _ = extend(s, t, &mut map, 0, &mut f);
    Ok(())
}

fn extend(
    s: &FiniteStructure,
    t: &FiniteStructure,
    map: &mut Vec<usize>,
    used: u32,
    f: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let i = map.len();
    if i == s.n() {
        return f(map);
    }
    for x in 0..t.n() {
        if used >> x & 1 == 1 || s.pattern(i, i) != t.pattern(x, x) {
            continue;
        }
        if (0..i).all(|j| s.pattern(i, j) == t.pattern(x, map[j])) {
            map.push(x);
            let flow = extend(s, t, map, used | 1 << x, f);
            map.pop();
            flow?;
        }
    }
    ControlFlow::Continue(())
}

/// Number of injective maps preserving and reflecting every relation.
pub fn count_embeddings(s: &FiniteStructure, t: &FiniteStructure) -> Result<u64, StructureError> {
    let mut count = 0u64;
    for_each_embedding(s, t, |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

pub fn count_automorphisms(s: &FiniteStructure) -> u64 {
    count_embeddings(s, s).expect("a structure shares its own signature")
}
