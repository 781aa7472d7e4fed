//! Finite multi-relational structures.
//!
//! A [`FiniteStructure`] has vertices `0..n` and, for every symbol of its
//! [`Signature`], a set of ordered vertex pairs. Loops are allowed, which is
//! how unary data (sorts, colours of an exterior disjoint union) is encoded.
//! Relations are stored as one adjacency bit row per (symbol, vertex), so
//! structures are limited to [`MAX_VERTICES`] vertices.

mod canon;
mod embed;
mod literal;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use canon::{canonical_form, canonical_form_colored, canonical_labeling, IsoClassId};
pub use embed::{count_automorphisms, count_embeddings, for_each_embedding};
pub use literal::StructureLiteral;

/// Upper bound on the number of vertices of a [`FiniteStructure`].
pub const MAX_VERTICES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate relation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("vertex {vertex} out of range for a structure on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("too many vertices: {0} (at most {MAX_VERTICES})")]
    TooLarge(usize),
    #[error("colour list has length {got}, expected {expected}")]
    ColorLength { got: usize, expected: usize },
    #[error("colour {0} is not a positive integer")]
    BadColor(u8),
    #[error("duplicate pair ({0}, {1}) in relation `{2}`")]
    DuplicatePair(usize, usize, String),
}

/// Ordered list of binary relation symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    symbols: Vec<String>,
}

impl Signature {
    pub fn new<S: Into<String>>(
        symbols: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Self>, StructureError> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(StructureError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Arc::new(Signature { symbols }))
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Signature {
            symbols: Vec::new(),
        })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }
}

/// A finite structure on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteStructure {
    sig: Arc<Signature>,
    n: usize,
    // row of relation `r` at vertex `v` lives at `adj[r * n + v]`
    adj: Vec<u32>,
}

impl FiniteStructure {
    /// Structure on `n` vertices with all relations empty.
    pub fn new(sig: Arc<Signature>, n: usize) -> Result<Self, StructureError> {
        if n > MAX_VERTICES {
            return Err(StructureError::TooLarge(n));
        }
        let adj = vec![0; sig.len() * n];
        Ok(FiniteStructure { sig, n, adj })
    }

    pub fn empty(sig: Arc<Signature>) -> Self {
        FiniteStructure { sig, n: 0, adj: Vec::new() }
    }

    /// Build from `(symbol index, from, to)` triples.
    pub fn from_pairs(
        sig: Arc<Signature>,
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, StructureError> {
        let mut s = Self::new(sig, n)?;
        for (r, a, b) in pairs {
            s.check_vertex(a)?;
            s.check_vertex(b)?;
            s.set(r, a, b, true);
        }
        Ok(s)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_relations(&self) -> usize {
        self.sig.len()
    }

    fn check_vertex(&self, v: usize) -> Result<(), StructureError> {
        if v >= self.n {
            Err(StructureError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn has(&self, r: usize, a: usize, b: usize) -> bool {
        self.adj[r * self.n + a] >> b & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, a: usize, b: usize, on: bool) {
        let row = &mut self.adj[r * self.n + a];
        if on {
            *row |= 1 << b;
        } else {
            *row &= !(1 << b);
        }
    }

    /// Out-neighbour bitmask of `v` in relation `r`.
    #[inline]
    pub fn row(&self, r: usize, v: usize) -> u32 {
        self.adj[r * self.n + v]
    }

    /// Pairs of relation `r`, sorted lexicographically.
    pub fn pairs(&self, r: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            let mut row = self.row(r, a);
            while row != 0 {
                let b = row.trailing_zeros() as usize;
                out.push((a, b));
                row &= row - 1;
            }
        }
        out
    }

    /// Bit pattern of all relations between `a` and `b`: bit `2r` for
    /// `(a, b)` and bit `2r + 1` for `(b, a)`.
    #[inline]
    pub(crate) fn pattern(&self, a: usize, b: usize) -> u64 {
        let mut p = 0u64;
        for r in 0..self.sig.len() {
            if self.has(r, a, b) {
                p |= 1 << (2 * r);
            }
            if self.has(r, b, a) {
                p |= 1 << (2 * r + 1);
            }
        }
        p
    }

    /// Substructure induced on `vertices`, renumbered `0..k` in the given order.
    pub fn induced_ordered(&self, vertices: &[usize]) -> Result<Self, StructureError> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let k = vertices.len();
        let mut out = Self::new(self.sig.clone(), k)?;
        for r in 0..self.sig.len() {
            for (i, &a) in vertices.iter().enumerate() {
                let row = self.row(r, a);
                let mut new_row = 0u32;
                for (j, &b) in vertices.iter().enumerate() {
                    if row >> b & 1 == 1 {
                        new_row |= 1 << j;
                    }
                }
                out.adj[r * k + i] = new_row;
            }
        }
        Ok(out)
    }

    /// Induced substructure on a vertex subset; vertices keep their relative order.
    pub fn induced_substructure(&self, vertices: &[usize]) -> Result<Self, StructureError> {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.induced_ordered(&sorted)
    }

    pub fn delete_vertex(&self, v: usize) -> Result<Self, StructureError> {
        self.check_vertex(v)?;
        let keep: Vec<usize> = (0..self.n).filter(|&w| w != v).collect();
        self.induced_ordered(&keep)
    }

    /// Copy with one extra isolated vertex `n` appended.
    pub fn with_new_vertex(&self) -> Result<Self, StructureError> {
        let n = self.n + 1;
        let mut out = Self::new(self.sig.clone(), n)?;
        for r in 0..self.sig.len() {
            for v in 0..self.n {
                out.adj[r * n + v] = self.row(r, v);
            }
        }
        Ok(out)
    }

    /// Relabelled copy: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut adj = vec![0u32; self.adj.len()];
        for r in 0..self.sig.len() {
            for a in 0..n {
                let mut row = self.row(r, a);
                let mut new_row = 0u32;
                while row != 0 {
                    let b = row.trailing_zeros() as usize;
                    new_row |= 1 << perm[b];
                    row &= row - 1;
                }
                adj[r * n + perm[a]] = new_row;
            }
        }
        FiniteStructure { sig: self.sig.clone(), n, adj }
    }

    /// Same vertices, relations `offset..offset + sig.len()` reinterpreted in `sig`.
    pub(crate) fn restrict_relations(&self, offset: usize, sig: &Arc<Signature>) -> Self {
        let n = self.n;
        let adj = self.adj[offset * n..(offset + sig.len()) * n].to_vec();
        FiniteStructure { sig: sig.clone(), n, adj }
    }

    /// Reduct: induced on `vertices` (in order) and restricted to a relation range.
    pub(crate) fn reduct(&self, vertices: &[usize], offset: usize, sig: &Arc<Signature>) -> Self {
        self.induced_ordered(vertices)
            .expect("reduct vertices are in range")
            .restrict_relations(offset, sig)
    }

    /// Adds every pair of `src` relation `r` to relation `offset + r` of `self`,
    /// mapping vertex `a` of `src` to `vertex_map[a]`.
    pub(crate) fn copy_relations_from(
        &mut self,
        src: &FiniteStructure,
        offset: usize,
        vertex_map: &[usize],
    ) {
        for r in 0..src.num_relations() {
            for (a, &ma) in vertex_map.iter().enumerate() {
                for (b, &mb) in vertex_map.iter().enumerate() {
                    if src.has(r, a, b) {
                        self.set(offset + r, ma, mb, true);
                    }
                }
            }
        }
    }
}

impl fmt::Debug for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_struct("FiniteStructure");
        m.field("n", &self.n);
        for (r, name) in self.sig.symbols().iter().enumerate() {
            m.field(name, &self.pairs(r));
        }
        m.finish()
    }
}

/// A structure whose vertices carry colours `1..r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredStructure {
    base: FiniteStructure,
    colors: Vec<u8>,
}

impl ColoredStructure {
    pub fn new(base: FiniteStructure, colors: Vec<u8>) -> Result<Self, StructureError> {
        if colors.len() != base.n() {
            return Err(StructureError::ColorLength {
                got: colors.len(),
                expected: base.n(),
            });
        }
        if let Some(&c) = colors.iter().find(|&&c| c == 0) {
            return Err(StructureError::BadColor(c));
        }
        Ok(ColoredStructure { base, colors })
    }

    pub fn base(&self) -> &FiniteStructure {
        &self.base
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Number of vertices of each colour `1..=max_color`.
    pub fn multidegree(&self, max_color: usize) -> Vec<usize> {
        let mut d = vec![0; max_color];
        for &c in &self.colors {
            d[c as usize - 1] += 1;
        }
        d
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut colors = vec![0; self.colors.len()];
        for (v, &c) in self.colors.iter().enumerate() {
            colors[perm[v]] = c;
        }
        ColoredStructure { base: self.base.relabel(perm), colors }
    }

    pub fn delete_vertex(&self, v: usize) -> Result<Self, StructureError> {
        let base = self.base.delete_vertex(v)?;
        let mut colors = self.colors.clone();
        colors.remove(v);
        Ok(ColoredStructure { base, colors })
    }

    pub fn recolor(&self, v: usize, color: u8) -> Self {
        let mut out = self.clone();
        out.colors[v] = color;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> FiniteStructure {
        let sig = Signature::new(["E"]).unwrap();
        FiniteStructure::from_pairs(sig, 2, [(0, 0, 1), (0, 1, 0)]).unwrap()
    }

    fn chain(n: usize) -> FiniteStructure {
        let sig = Signature::new(["<"]).unwrap();
        let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (0, a, b)));
        FiniteStructure::from_pairs(sig, n, pairs).unwrap()
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert_eq!(
            Signature::new(["a", "a"]).unwrap_err(),
            StructureError::DuplicateSymbol("a".into())
        );
    }

    #[test]
    fn induced_on_single_vertex() {
        let s = k2().induced_substructure(&[0]).unwrap();
        assert_eq!(s.n(), 1);
        assert!(s.pairs(0).is_empty());
    }

    #[test]
    fn induced_keeps_order() {
        let s = chain(3).induced_substructure(&[2, 0]).unwrap();
        assert_eq!(s, chain(2));
    }

    #[test]
    fn induced_on_all_vertices_is_identity() {
        let c = chain(4);
        assert_eq!(c.induced_substructure(&[0, 1, 2, 3]).unwrap(), c);
    }

    #[test]
    fn out_of_range_vertex() {
        assert!(matches!(
            k2().induced_substructure(&[0, 5]),
            Err(StructureError::VertexOutOfRange { vertex: 5, n: 2 })
        ));
        assert!(k2().delete_vertex(2).is_err());
    }

    #[test]
    fn deleting_middle_of_chain() {
        assert_eq!(chain(3).delete_vertex(1).unwrap(), chain(2));
        let one = chain(1).delete_vertex(0).unwrap();
        assert_eq!(one.n(), 0);
    }

    #[test]
    fn relabel_swaps_edges() {
        let c = chain(2).relabel(&[1, 0]);
        assert_eq!(c.pairs(0), vec![(1, 0)]);
    }

    #[test]
    fn colored_multidegree() {
        let c = ColoredStructure::new(chain(3), vec![1, 2, 1]).unwrap();
        assert_eq!(c.multidegree(2), vec![2, 1]);
        assert!(ColoredStructure::new(chain(2), vec![1]).is_err());
        assert!(ColoredStructure::new(chain(1), vec![0]).is_err());
    }
}
