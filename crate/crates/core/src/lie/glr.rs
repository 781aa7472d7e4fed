//! The gl_r action on colored invariant bases.
//!
//! A basis vector is a colour-preserving isomorphism class of members whose
//! vertices carry colours `1..r-1`; colour `i` marks the finite block
//! `Y_i`, and the remaining points of the ambient structure form the
//! cofinite block `Y_r`. The multidegree records the block sizes. `E_ij`
//! moves a point from block `j` to block `i`, shifting the multidegree by
//! `e_i - e_j` (with `e_r = 0`).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::LieError;
use crate::age::{Age, Levels};
use crate::linalg::{Grade, LevelMatrix};
use crate::measure::Measure;
use crate::parallel;
use crate::scalar::Scalar;
use crate::structure::{canonical_form_colored, canonical_labeling, ColoredStructure, IsoClassId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredClass {
    pub id: IsoClassId,
    pub rep: ColoredStructure,
}

impl ColoredClass {
    pub fn of(c: &ColoredStructure) -> Self {
        let (id, perm) = canonical_labeling(c.base(), Some(c.colors()));
        ColoredClass { id, rep: c.relabel(&perm) }
    }
}

/// Colored classes by multidegree, each piece sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredBasis {
    r: usize,
    pieces: BTreeMap<Grade, Vec<ColoredClass>>,
}

fn colorings(n: usize, colors: u8) -> impl Iterator<Item = Vec<u8>> {
    let total = (colors as usize).pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let c = (code % colors as usize) as u8 + 1;
                code /= colors as usize;
                c
            })
            .collect()
    })
}

impl ColoredBasis {
    /// All colorings of the uncolored classes of `levels`, up to
    /// colour-preserving isomorphism.
    pub fn build(levels: &Levels, r: usize) -> Result<Self, LieError> {
        if r < 2 {
            return Err(LieError::BadRank(r));
        }
        let classes: Vec<_> = levels.iter().flatten().collect();
        let found = parallel::map(&classes, |c| {
            colorings(c.rep.n(), (r - 1) as u8)
                .map(|colors| {
                    ColoredClass::of(&ColoredStructure::new(c.rep.clone(), colors).expect("valid colors"))
                })
                .collect::<Vec<_>>()
        });
        let mut pieces: BTreeMap<Grade, BTreeMap<IsoClassId, ColoredStructure>> = BTreeMap::new();
        for n in 0..levels.len() {
            for d in multidegrees(r - 1, n) {
                pieces.entry(d).or_default();
            }
        }
        for c in found.into_iter().flatten() {
            pieces.entry(c.rep.multidegree(r - 1)).or_default().insert(c.id, c.rep);
        }
        let pieces = pieces
            .into_iter()
            .map(|(d, m)| (d, m.into_iter().map(|(id, rep)| ColoredClass { id, rep }).collect()))
            .collect();
        Ok(ColoredBasis { r, pieces })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn piece(&self, d: &[usize]) -> &[ColoredClass] {
        self.pieces.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn grades(&self) -> impl Iterator<Item = &Grade> {
        self.pieces.keys()
    }

    pub fn index_of(&self, d: &[usize], id: &IsoClassId) -> Option<usize> {
        self.piece(d).binary_search_by(|c| c.id.cmp(id)).ok()
    }

    fn lookup(&self, d: &[usize], c: &ColoredStructure) -> Result<usize, LieError> {
        let id = canonical_form_colored(c);
        self.index_of(d, &id).ok_or(LieError::MissingClass(id))
    }
}

/// Multidegrees with `parts` entries summing to `total`.
pub(crate) fn multidegrees(parts: usize, total: usize) -> Vec<Grade> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in multidegrees(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `d + e_i - e_j` (1-based colours, `e_r = 0`), if non-negative.
fn shift(d: &[usize], r: usize, i: usize, j: usize) -> Option<Grade> {
    let mut out = d.to_vec();
    if i == j {
        return Some(out);
    }
    if j < r {
        out[j - 1] = out[j - 1].checked_sub(1)?;
    }
    if i < r {
        out[i - 1] += 1;
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlrViolation {
    pub relation: String,
    pub grade: Grade,
    pub row: Option<IsoClassId>,
    pub col: Option<IsoClassId>,
    pub expected: Scalar,
    pub actual: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlrReport {
    pub r: usize,
    pub degree: usize,
    pub commutators_checked: usize,
    pub symmetries_checked: usize,
    pub violations: Vec<GlrViolation>,
}

impl GlrReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The operators `E_ij` on colored pieces up to a total degree.
pub struct GlAction<'m> {
    measure: &'m Measure,
    age: Arc<Age>,
    basis: ColoredBasis,
    r: usize,
    degree: usize,
    mu_x: Scalar,
    cache: HashMap<(usize, usize, Grade), LevelMatrix>,
}

impl<'m> GlAction<'m> {
    /// Basis through total degree `degree + 2` and every `E_ij` on pieces of
    /// total degree at most `degree + 1`, enough to check all relations on
    /// pieces of total degree at most `degree`.
    pub fn build(measure: &'m Measure, r: usize, degree: usize) -> Result<Self, LieError> {
        if r < 2 {
            return Err(LieError::BadRank(r));
        }
        let age = measure.age().clone();
        let levels = age.enumerate_levels(degree + 2, None)?;
        let basis = ColoredBasis::build(&levels, r)?;
        let mu_x = measure.total_point_measure()?;
        let mut action = GlAction { measure, age, basis, r, degree, mu_x, cache: HashMap::new() };
        let mut keys = Vec::new();
        for total in 0..=degree + 1 {
            for d in multidegrees(r - 1, total) {
                for i in 1..=r {
                    for j in 1..=r {
                        keys.push((i, j, d.clone()));
                    }
                }
            }
        }
        let built = parallel::try_map(&keys, |(i, j, d)| action.compute(*i, *j, d))?;
        action.cache = keys.into_iter().zip(built).collect();
        Ok(action)
    }

    pub fn basis(&self) -> &ColoredBasis {
        &self.basis
    }

    pub fn mu_x(&self) -> &Scalar {
        &self.mu_x
    }

    /// `E_ij` on the piece `d` (a matrix with no rows when the shifted
    /// multidegree would be negative); `None` outside the precomputed range.
    pub fn matrix(&self, i: usize, j: usize, d: &[usize]) -> Option<&LevelMatrix> {
        self.cache.get(&(i, j, d.to_vec()))
    }

    fn compute(&self, i: usize, j: usize, d: &[usize]) -> Result<LevelMatrix, LieError> {
        let r = self.r;
        let cols = self.basis.piece(d).len();
        let Some(t) = shift(d, r, i, j) else {
            return Ok(LevelMatrix::zero(d.to_vec(), d.to_vec(), 0, cols));
        };
        let targets = self.basis.piece(&t);
        let mut m = LevelMatrix::zero(d.to_vec(), t.clone(), targets.len(), cols);
        let one = Scalar::one();
        if i == j {
            let diag = if i < r {
                Scalar::int(d[i - 1] as i64)
            } else {
                &self.mu_x - &Scalar::int(d.iter().sum::<usize>() as i64)
            };
            return Ok(LevelMatrix::identity(d.to_vec(), cols, &diag));
        }
        for (row, target) in targets.iter().enumerate() {
            let colors = target.rep.colors();
            if j == r {
                // the target has a block-i vertex that is absent from the source
                for v in (0..colors.len()).filter(|&v| colors[v] as usize == i) {
                    let col = self.basis.lookup(d, &target.rep.delete_vertex(v)?)?;
                    m.add(row, col, &one);
                }
            } else if i < r {
                for v in (0..colors.len()).filter(|&v| colors[v] as usize == i) {
                    let col = self.basis.lookup(d, &target.rep.recolor(v, j as u8))?;
                    m.add(row, col, &one);
                }
            } else {
                // i = r: the source has one more block-j vertex than the target
                for ext in self.age.one_point_extensions(target.rep.base())? {
                    let mut c = colors.to_vec();
                    c.push(j as u8);
                    let source = ColoredStructure::new(ext.assembled().clone(), c)?;
                    let col = self.basis.lookup(d, &source)?;
                    m.add(row, col, &self.measure.one_point_ratio(&ext)?);
                }
            }
        }
        Ok(m)
    }

    /// `E_ab ∘ E_lm` on `d`, landing in `target`.
    fn product(&self, (a, b): (usize, usize), (l, m): (usize, usize), d: &[usize], target: &[usize]) -> LevelMatrix {
        let rows = self.basis.piece(target).len();
        let cols = self.basis.piece(d).len();
        let zero = || LevelMatrix::zero(d.to_vec(), target.to_vec(), rows, cols);
        let Some(mid) = shift(d, self.r, l, m) else {
            return zero();
        };
        let first = &self.cache[&(l, m, d.to_vec())];
        let second = &self.cache[&(a, b, mid)];
        second.compose(first).expect("shapes agree")
    }

    /// Checks `[E_ij, E_lm] = δ_jl E_im − δ_mi E_lj` on every piece of total
    /// degree at most `degree`, and `σ E_ij σ⁻¹ = E_σ(i)σ(j)` for every
    /// transposition `σ` of two finite colours.
    pub fn verify(&self) -> GlrReport {
        let r = self.r;
        let mut report = GlrReport {
            r,
            degree: self.degree,
            commutators_checked: 0,
            symmetries_checked: 0,
            violations: Vec::new(),
        };
        let grades: Vec<Grade> = (0..=self.degree).flat_map(|t| multidegrees(r - 1, t)).collect();
        let quads: Vec<(usize, usize, usize, usize)> = (1..=r)
            .flat_map(|i| (1..=r).flat_map(move |j| (1..=r).flat_map(move |l| (1..=r).map(move |m| (i, j, l, m)))))
            .collect();
        for d in &grades {
            for &(i, j, l, m) in &quads {
                let Some(target) = shift(d, r, i, j).and_then(|g| shift(&g, r, l, m)) else {
                    continue;
                };
                report.commutators_checked += 1;
                let lhs = self
                    .product((i, j), (l, m), d, &target)
                    .sub(&self.product((l, m), (i, j), d, &target))
                    .expect("same shape");
                let rows = self.basis.piece(&target).len();
                let cols = self.basis.piece(d).len();
                let mut rhs = LevelMatrix::zero(d.to_vec(), target.clone(), rows, cols);
                if j == l {
                    rhs = rhs.sub(&self.cache[&(i, m, d.clone())].scale(&Scalar::int(-1))).expect("shape");
                }
                if m == i {
                    rhs = rhs.sub(&self.cache[&(l, j, d.clone())]).expect("shape");
                }
                let relation = format!("[E{i}{j},E{l}{m}]");
                self.record(&mut report, &relation, d, &target, &lhs, &rhs);
            }
        }
        for a in 1..r {
            for b in a + 1..r {
                let sigma = |c: usize| if c == a { b } else if c == b { a } else { c };
                for d in &grades {
                    for i in 1..=r {
                        for j in 1..=r {
                            report.symmetries_checked += 1;
                            self.check_symmetry(&mut report, (a, b), &sigma, i, j, d);
                        }
                    }
                }
            }
        }
        report
    }

    fn record(
        &self,
        report: &mut GlrReport,
        relation: &str,
        d: &[usize],
        target: &[usize],
        actual: &LevelMatrix,
        expected: &LevelMatrix,
    ) {
        let diff = actual.sub(expected).expect("same shape");
        for (row, col, _) in diff.entries() {
            report.violations.push(GlrViolation {
                relation: relation.to_string(),
                grade: d.to_vec(),
                row: Some(self.basis.piece(target)[row].id.clone()),
                col: Some(self.basis.piece(d)[col].id.clone()),
                expected: expected.get(row, col),
                actual: actual.get(row, col),
            });
        }
    }

    fn check_symmetry(
        &self,
        report: &mut GlrReport,
        (a, b): (usize, usize),
        sigma: &impl Fn(usize) -> usize,
        i: usize,
        j: usize,
        d: &[usize],
    ) {
        let swap = |c: &ColoredStructure| {
            let colors = c.colors().iter().map(|&x| sigma(x as usize) as u8).collect();
            ColoredStructure::new(c.base().clone(), colors).expect("valid colors")
        };
        let swap_grade = |g: &[usize]| {
            let mut out = g.to_vec();
            out.swap(a - 1, b - 1);
            out
        };
        let relation = format!("(σ{a}{b})E{i}{j}(σ{a}{b})=E{}{}", sigma(i), sigma(j));
        let m = &self.cache[&(i, j, d.to_vec())];
        let sd = swap_grade(d);
        let image = &self.cache[&(sigma(i), sigma(j), sd.clone())];
        let mut fail = m.nnz() != image.nnz();
        if let Some(target) = shift(d, self.r, i, j) {
            let st = swap_grade(&target);
            for (row, col, v) in m.entries() {
                let srow = self.basis.lookup(&st, &swap(&self.basis.piece(&target)[row].rep));
                let scol = self.basis.lookup(&sd, &swap(&self.basis.piece(d)[col].rep));
                match (srow, scol) {
                    (Ok(sr), Ok(sc)) if image.get(sr, sc) == *v => {}
                    _ => fail = true,
                }
            }
        }
        if fail {
            report.violations.push(GlrViolation {
                relation,
                grade: d.to_vec(),
                row: None,
                col: None,
                expected: Scalar::int(m.nnz() as i64),
                actual: Scalar::int(image.nnz() as i64),
            });
        }
    }
}
