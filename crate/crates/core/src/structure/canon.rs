//! Canonical labelling of small structures.
//!
//! Individualisation-refinement: vertices are split into an ordered partition
//! by an isomorphism-invariant colour refinement, the first non-singleton cell
//! is individualised vertex by vertex, and the lexicographically smallest
//! leaf encoding wins. A cell whose vertices are pairwise exchangeable (every
//! transposition inside it is an automorphism) is individualised only once.

use std::fmt;

use super::{ColoredStructure, FiniteStructure};

/// Canonical byte encoding of an isomorphism class.
///
/// Equal ids mean isomorphic structures (colour-preserving for coloured ones).
/// The derived order is the total order used for every basis in this crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClassId(Vec<u8>);

impl IsoClassId {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Number of vertices of the encoded structure.
    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }
}

impl fmt::Debug for IsoClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsoClassId({})", self.to_hex())
    }
}

impl fmt::Display for IsoClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

const COLOR_MARKER: u8 = 0xc0;

pub fn canonical_form(s: &FiniteStructure) -> IsoClassId {
    canonical_labeling(s, None).0
}

pub fn canonical_form_colored(c: &ColoredStructure) -> IsoClassId {
    canonical_labeling(c.base(), Some(c.colors())).0
}

/// Canonical id together with a labelling `perm` (vertex `v` gets label
/// `perm[v]`) such that `s.relabel(&perm)` is the canonical representative.
pub fn canonical_labeling(s: &FiniteStructure, colors: Option<&[u8]>) -> (IsoClassId, Vec<usize>) {
    let n = s.n();
    let mut search = Search::new(s, colors);
    let ranks = search.initial_ranks();
    search.run(ranks);
    let (code, perm) = search.best.expect("search visits at least one leaf");

    let mut bytes = Vec::with_capacity(2 + n + 4 * code.len());
    bytes.push(n as u8);
    if let Some(colors) = colors {
        bytes.push(COLOR_MARKER);
        let mut inv = vec![0; n];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        bytes.extend(inv.iter().map(|&v| colors[v]));
    }
    for word in code {
        bytes.extend_from_slice(&word.to_be_bytes());
    }
    (IsoClassId(bytes), perm)
}

struct Search<'a> {
    s: &'a FiniteStructure,
    colors: Option<&'a [u8]>,
    n: usize,
    pat: Vec<u64>,
    best: Option<(Vec<u32>, Vec<usize>)>,
}

fn rank_by_keys<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0; keys.len()];
    for (pos, &v) in order.iter().enumerate() {
        ranks[v] = if pos > 0 && keys[order[pos - 1]] == keys[v] {
            ranks[order[pos - 1]]
        } else {
            pos
        };
    }
    ranks
}

fn distinct(ranks: &[usize]) -> usize {
    let mut seen = ranks.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

impl<'a> Search<'a> {
    fn new(s: &'a FiniteStructure, colors: Option<&'a [u8]>) -> Self {
        let n = s.n();
        let mut pat = vec![0u64; n * n];
        for a in 0..n {
            for b in 0..n {
                pat[a * n + b] = s.pattern(a, b);
            }
        }
        Search { s, colors, n, pat, best: None }
    }

    #[inline]
    fn pat(&self, a: usize, b: usize) -> u64 {
        self.pat[a * self.n + b]
    }

    fn initial_ranks(&self) -> Vec<usize> {
        // colour, loop pattern, and (out, in) degree per relation
        type Key = (u8, u64, Vec<(u32, u32)>);
        let k = self.s.num_relations();
        let keys: Vec<Key> = (0..self.n)
            .map(|v| {
                let color = self.colors.map_or(0, |c| c[v]);
                let degrees = (0..k)
                    .map(|r| {
                        let out = (self.s.row(r, v) & !(1 << v)).count_ones();
                        let inn = (0..self.n).filter(|&w| w != v && self.s.has(r, w, v)).count();
                        (out, inn as u32)
                    })
                    .collect();
                (color, self.pat(v, v), degrees)
            })
            .collect();
        let mut ranks = rank_by_keys(&keys);
        self.refine(&mut ranks);
        ranks
    }

    fn refine(&self, ranks: &mut Vec<usize>) {
        let mut cells = distinct(ranks);
        while cells < self.n {
            let keys: Vec<(usize, Vec<(usize, u64)>)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<(usize, u64)> = (0..self.n)
                        .filter(|&w| w != v && self.pat(v, w) != 0)
                        .map(|w| (ranks[w], self.pat(v, w)))
                        .collect();
                    nb.sort_unstable();
                    (ranks[v], nb)
                })
                .collect();
            let next = rank_by_keys(&keys);
            let next_cells = distinct(&next);
            *ranks = next;
            if next_cells == cells {
                break;
            }
            cells = next_cells;
        }
    }

    /// Whether swapping `u` and `w` is an automorphism.
    fn twins(&self, u: usize, w: usize) -> bool {
        if self.pat(u, u) != self.pat(w, w) {
            return false;
        }
        let p = self.pat(u, w);
        // swap the (u,w)/(w,u) bit of every relation
        let even = p & 0x5555_5555_5555_5555;
        let odd = p & 0xaaaa_aaaa_aaaa_aaaa;
        if (even << 1 | odd >> 1) != p {
            return false;
        }
        (0..self.n)
            .filter(|&x| x != u && x != w)
            .all(|x| self.pat(u, x) == self.pat(w, x))
    }

    fn run(&mut self, ranks: Vec<usize>) {
        if distinct(&ranks) == self.n {
            self.leaf(ranks);
            return;
        }
        let target = (0..self.n)
            .filter(|&v| ranks.iter().filter(|&&r| r == ranks[v]).count() > 1)
            .map(|v| ranks[v])
            .min()
            .expect("non-discrete partition has a non-singleton cell");
        let cell: Vec<usize> = (0..self.n).filter(|&v| ranks[v] == target).collect();
        let exchangeable = cell[1..].iter().all(|&w| self.twins(cell[0], w));
        let candidates = if exchangeable { &cell[..1] } else { &cell[..] };
        for &v in candidates {
            let mut next = ranks.clone();
            for &w in &cell {
                if w != v {
                    next[w] = target + 1;
                }
            }
            self.refine(&mut next);
            self.run(next);
        }
    }

    fn leaf(&mut self, perm: Vec<usize>) {
        let n = self.n;
        let k = self.s.num_relations();
        let mut inv = vec![0; n];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        let mut code = Vec::with_capacity(k * n);
        for r in 0..k {
            for &v in &inv {
                let mut row = self.s.row(r, v);
                let mut mapped = 0u32;
                while row != 0 {
                    let b = row.trailing_zeros() as usize;
                    mapped |= 1 << (n - 1 - perm[b]);
                    row &= row - 1;
                }
                code.push(mapped);
            }
        }
        match &self.best {
            Some((best, _)) if *best <= code => {}
            _ => self.best = Some((code, perm)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Signature;
    use super::*;

    fn k2(reversed: bool) -> FiniteStructure {
        let sig = Signature::new(["E"]).unwrap();
        let pairs = if reversed { [(0, 1, 0), (0, 0, 1)] } else { [(0, 0, 1), (0, 1, 0)] };
        FiniteStructure::from_pairs(sig, 2, pairs).unwrap()
    }

    #[test]
    fn empty_structure_has_fixed_encoding() {
        let e = FiniteStructure::empty(Signature::new(["E"]).unwrap());
        assert_eq!(canonical_form(&e).as_bytes(), &[0]);
    }

    #[test]
    fn k2_labelings_agree() {
        assert_eq!(canonical_form(&k2(false)), canonical_form(&k2(true)));
        assert_eq!(canonical_form(&k2(false)), canonical_form(&k2(false).relabel(&[1, 0])));
    }

    #[test]
    fn loop_distinguishes_points() {
        let sig = Signature::new(["E"]).unwrap();
        let plain = FiniteStructure::new(sig.clone(), 1).unwrap();
        let looped = FiniteStructure::from_pairs(sig, 1, [(0, 0, 0)]).unwrap();
        assert_ne!(canonical_form(&plain), canonical_form(&looped));
    }

    #[test]
    fn colors_must_be_preserved() {
        let sig = Signature::new(["<"]).unwrap();
        let lt = FiniteStructure::from_pairs(sig, 2, [(0, 0, 1)]).unwrap();
        let a = ColoredStructure::new(lt.clone(), vec![1, 2]).unwrap();
        let b = ColoredStructure::new(lt, vec![2, 1]).unwrap();
        assert_ne!(canonical_form_colored(&a), canonical_form_colored(&b));
    }

    #[test]
    fn labeling_yields_representative() {
        let sig = Signature::new(["E"]).unwrap();
        let path = FiniteStructure::from_pairs(sig, 3, [(0, 0, 1), (0, 1, 0), (0, 1, 2), (0, 2, 1)])
            .unwrap();
        let (id, perm) = canonical_labeling(&path, None);
        let rep = path.relabel(&perm);
        let (id2, perm2) = canonical_labeling(&rep, None);
        assert_eq!(id, id2);
        assert_eq!(rep.relabel(&perm2), rep);
    }
}
