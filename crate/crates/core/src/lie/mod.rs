//! The sl2 action on the orbit algebra, realized on invariant bases.
//!
//! Level `n` of the basis holds the isomorphism classes of `n`-vertex
//! members. `e` raises: the coefficient from `[s]` to `[t]` counts the
//! vertices of `t` whose deletion leaves a copy of `s`. `f` lowers: the
//! coefficient from `[t]` to `[u]` sums the one-point ratios of the
//! extensions of `u` that are copies of `t`. `h` acts on level `n` by
//! `2n - mu(X)`. Compositions apply the right factor first, so `e∘f`
//! lowers and then raises.

mod dot;
mod glr;

use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::age::{Age, AgeError, Class, Levels};
use crate::linalg::LevelMatrix;
use crate::measure::{Measure, MeasureError};
use crate::parallel;
use crate::scalar::{Scalar, ScalarError};
use crate::structure::{canonical_form, IsoClassId};

pub use dot::{emit_dot, Operator};
pub use glr::{ColoredBasis, ColoredClass, GlAction, GlrReport, GlrViolation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error(transparent)]
    Age(#[from] AgeError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Structure(#[from] crate::structure::StructureError),
    #[error("the gl_r action needs r >= 2, got {0}")]
    BadRank(usize),
    #[error("class {0} produced outside the enumerated basis")]
    MissingClass(IsoClassId),
}

fn lookup(levels: &Levels, n: usize, id: &IsoClassId) -> Result<usize, LieError> {
    levels.index_of(n, id).ok_or_else(|| LieError::MissingClass(id.clone()))
}

/// `e` from level `n` to level `n + 1`; needs both levels enumerated.
pub fn e_matrix(levels: &Levels, n: usize) -> Result<LevelMatrix, LieError> {
    let targets = levels.level(n + 1);
    let rows = parallel::try_map(targets, |t| {
        let mut out = Vec::with_capacity(t.rep.n());
        for v in 0..t.rep.n() {
            let id = canonical_form(&t.rep.delete_vertex(v).expect("in range"));
            out.push(lookup(levels, n, &id)?);
        }
        Ok::<_, LieError>(out)
    })?;
    let mut m = LevelMatrix::zero(vec![n], vec![n + 1], targets.len(), levels.level(n).len());
    let one = Scalar::one();
    for (row, cols) in rows.into_iter().enumerate() {
        for col in cols {
            m.add(row, col, &one);
        }
    }
    Ok(m)
}

/// `f` from level `n >= 1` to level `n - 1`.
pub fn f_matrix(measure: &Measure, levels: &Levels, n: usize) -> Result<LevelMatrix, LieError> {
    assert!(n >= 1, "f lowers from level 1 upwards");
    let age = measure.age();
    let targets = levels.level(n - 1);
    let rows = parallel::try_map(targets, |u| {
        let mut out = Vec::new();
        for ext in age.one_point_extensions(&u.rep)? {
            let col = lookup(levels, n, &canonical_form(ext.assembled()))?;
            out.push((col, measure.one_point_ratio(&ext)?));
        }
        Ok::<_, LieError>(out)
    })?;
    let mut m = LevelMatrix::zero(vec![n], vec![n - 1], targets.len(), levels.level(n).len());
    for (row, cols) in rows.into_iter().enumerate() {
        for (col, v) in cols {
            m.add(row, col, &v);
        }
    }
    Ok(m)
}

/// `2n - mu(X)`.
pub fn h_eigenvalue(mu_x: &Scalar, n: usize) -> Scalar {
    Scalar::int(2 * n as i64) - mu_x
}

/// Operators `e`, `f`, `h` through level `N`, with the basis and `e`/`f`
/// reaching level `N + 1` so that every relation on levels `0..=N` can be
/// checked.
#[derive(Debug, Clone)]
pub struct ActionTruncation {
    age: Arc<Age>,
    levels: Levels,
    max_level: usize,
    mu_x: Scalar,
    /// `e[n]`: level `n` to `n + 1`, for `n` in `0..=N`.
    e: Vec<LevelMatrix>,
    /// `f[n - 1]`: level `n` to `n - 1`, for `n` in `1..=N + 1`.
    f: Vec<LevelMatrix>,
    h: Vec<Scalar>,
}

impl ActionTruncation {
    pub fn build(measure: &Measure, max_level: usize, cap: Option<usize>) -> Result<Self, LieError> {
        let age = measure.age().clone();
        let levels = age.enumerate_levels(max_level + 1, cap)?;
        Self::from_levels(measure, levels, max_level)
    }

    /// Builds from levels already enumerated through `max_level + 1`.
    pub fn from_levels(measure: &Measure, levels: Levels, max_level: usize) -> Result<Self, LieError> {
        assert!(levels.len() >= max_level + 2, "levels must reach max_level + 1");
        let mu_x = measure.total_point_measure()?;
        let ns: Vec<usize> = (0..=max_level).collect();
        let e = parallel::try_map(&ns, |&n| e_matrix(&levels, n))?;
        let f = parallel::try_map(&ns, |&n| f_matrix(measure, &levels, n + 1))?;
        let h = (0..=max_level + 1).map(|n| h_eigenvalue(&mu_x, n)).collect();
        Ok(ActionTruncation { age: measure.age().clone(), levels, max_level, mu_x, e, f, h })
    }

    pub fn age(&self) -> &Arc<Age> {
        &self.age
    }

    pub fn levels(&self) -> &Levels {
        &self.levels
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn mu_x(&self) -> &Scalar {
        &self.mu_x
    }

    /// `e` out of level `n`.
    pub fn e(&self, n: usize) -> Option<&LevelMatrix> {
        self.e.get(n)
    }

    /// `f` out of level `n`; `None` at level 0, where `f` vanishes.
    pub fn f(&self, n: usize) -> Option<&LevelMatrix> {
        n.checked_sub(1).and_then(|i| self.f.get(i))
    }

    pub fn h(&self, n: usize) -> Option<&Scalar> {
        self.h.get(n)
    }

    pub fn class(&self, n: usize, index: usize) -> &Class {
        &self.levels.level(n)[index]
    }

    /// Every matrix entry and `mu(X)` evaluated at `lambda = at`.
    pub fn specialize(&self, at: &BigRational) -> Result<Self, LieError> {
        let spec = |ms: &[LevelMatrix]| ms.iter().map(|m| m.specialize(at)).collect::<Result<Vec<_>, _>>();
        let mu_x = self.mu_x.substitute(at)?;
        Ok(ActionTruncation {
            age: self.age.clone(),
            levels: self.levels.clone(),
            max_level: self.max_level,
            e: spec(&self.e)?,
            f: spec(&self.f)?,
            h: (0..self.h.len()).map(|n| h_eigenvalue(&mu_x, n)).collect(),
            mu_x,
        })
    }

    /// Checks `[e,f] = h`, `[h,e] = 2e` and `[h,f] = -2f` on levels `0..=N`.
    pub fn verify_sl2(&self) -> Sl2Report {
        let mut report = Sl2Report { levels_checked: self.max_level + 1, violations: Vec::new() };
        for n in 0..=self.max_level {
            let size = self.levels.level(n).len();
            let e = &self.e[n];
            let fe = self.f[n].compose(e).expect("shapes agree");
            let ef = match self.f(n) {
                Some(f) => self.e[n - 1].compose(f).expect("shapes agree"),
                None => LevelMatrix::zero(vec![n], vec![n], size, size),
            };
            let bracket = ef.sub(&fe).expect("same shape");
            let expected = LevelMatrix::identity(vec![n], size, &self.h[n]);
            self.collect(&mut report, "[e,f]=h", n, n, &bracket, &expected);

            let he = e.scale(&self.h[n + 1]).sub(&e.scale(&self.h[n])).expect("same shape");
            self.collect(&mut report, "[h,e]=2e", n, n + 1, &he, &e.scale(&Scalar::int(2)));

            if let Some(f) = self.f(n) {
                let hf = f.scale(&self.h[n - 1]).sub(&f.scale(&self.h[n])).expect("same shape");
                self.collect(&mut report, "[h,f]=-2f", n, n - 1, &hf, &f.scale(&Scalar::int(-2)));
            }
        }
        report
    }

    fn collect(
        &self,
        report: &mut Sl2Report,
        relation: &'static str,
        source: usize,
        target: usize,
        actual: &LevelMatrix,
        expected: &LevelMatrix,
    ) {
        let diff = actual.sub(expected).expect("same shape");
        for (r, c, _) in diff.entries() {
            report.violations.push(Sl2Violation {
                relation,
                level: source,
                row: self.levels.level(target)[r].id.clone(),
                col: self.levels.level(source)[c].id.clone(),
                expected: expected.get(r, c),
                actual: actual.get(r, c),
            });
        }
    }

    /// `(n, rank of e out of level n, a_n)` for `n < N`; `e` is injective
    /// exactly when the rank equals `a_n`.
    pub fn e_ranks(&self) -> Vec<(usize, usize, usize)> {
        let ns: Vec<usize> = (0..self.max_level).collect();
        parallel::map(&ns, |&n| (n, self.e[n].rank(), self.levels.level(n).len()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sl2Violation {
    pub relation: &'static str,
    pub level: usize,
    pub row: IsoClassId,
    pub col: IsoClassId,
    pub expected: Scalar,
    pub actual: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sl2Report {
    pub levels_checked: usize,
    pub violations: Vec<Sl2Violation>,
}

impl Sl2Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests;
