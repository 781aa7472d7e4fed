//! Sparse operator blocks between graded pieces, and exact rank over Q(lambda).

use std::collections::BTreeMap;

use num_rational::BigRational;
use thiserror::Error;

use crate::scalar::{Poly, Scalar, ScalarError};

/// Index of a graded piece: `[n]` for a level, the multidegree for gl_r bases.
pub type Grade = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("cannot compose a {0}x{1} matrix with a {2}x{3} matrix")]
    Shape(usize, usize, usize, usize),
}

/// Sparse matrix from the basis of `source` to the basis of `target`.
/// Rows index target classes, columns source classes; stored entries are
/// never zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMatrix {
    source: Grade,
    target: Grade,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl LevelMatrix {
    pub fn zero(source: Grade, target: Grade, rows: usize, cols: usize) -> Self {
        LevelMatrix { source, target, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(grade: Grade, size: usize, diagonal: &Scalar) -> Self {
        let mut m = Self::zero(grade.clone(), grade, size, size);
        for i in 0..size {
            m.add(i, i, diagonal);
        }
        m
    }

    pub fn source(&self) -> &Grade {
        &self.source
    }

    pub fn target(&self) -> &Grade {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `value` to entry `(row, col)`, dropping it if the sum is zero.
    pub fn add(&mut self, row: usize, col: usize, value: &Scalar) {
        assert!(row < self.rows && col < self.cols, "entry ({row}, {col}) out of range");
        if value.is_zero() {
            return;
        }
        let sum = match self.entries.remove(&(row, col)) {
            Some(old) => old + value,
            None => value.clone(),
        };
        if !sum.is_zero() {
            self.entries.insert((row, col), sum);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self ∘ right`: apply `right` first.
    pub fn compose(&self, right: &LevelMatrix) -> Result<LevelMatrix, LinalgError> {
        if self.cols != right.rows {
            return Err(LinalgError::Shape(self.rows, self.cols, right.rows, right.cols));
        }
        let mut by_row: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); right.rows];
        for (r, c, v) in right.entries() {
            by_row[r].push((c, v));
        }
        let mut out = LevelMatrix::zero(right.source.clone(), self.target.clone(), self.rows, right.cols);
        for (i, k, a) in self.entries() {
            for &(j, b) in &by_row[k] {
                out.add(i, j, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LevelMatrix) -> Result<LevelMatrix, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::Shape(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add(r, c, &-v);
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Scalar) -> LevelMatrix {
        let mut out = LevelMatrix::zero(self.source.clone(), self.target.clone(), self.rows, self.cols);
        for (r, c, v) in self.entries() {
            out.add(r, c, &(v * k));
        }
        out
    }

    /// Entrywise value at `lambda = at`, as constant scalars.
    pub fn specialize(&self, at: &BigRational) -> Result<LevelMatrix, ScalarError> {
        let mut out = LevelMatrix::zero(self.source.clone(), self.target.clone(), self.rows, self.cols);
        for (r, c, v) in self.entries() {
            out.add(r, c, &v.substitute(at)?);
        }
        Ok(out)
    }

    /// Rank over Q(lambda).
    pub fn rank(&self) -> usize {
        let mut dense: Vec<Vec<Poly>> = vec![vec![Poly::zero(); self.cols]; self.rows];
        let mut row_entries: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            row_entries[r].push((c, v));
        }
        for (r, entries) in row_entries.iter().enumerate() {
            // clear denominators: multiply the row by the lcm of its denominators
            let lcm = entries.iter().fold(Poly::one(), |l, (_, v)| {
                let d = v.denominator();
                let g = l.gcd(d);
                l.mul(&d.div_exact(&g).expect("gcd divides"))
            });
            for &(c, v) in entries {
                let factor = lcm.div_exact(v.denominator()).expect("lcm is a multiple");
                dense[r][c] = v.numerator().mul(&factor);
            }
        }
        fraction_free_rank(dense, self.cols)
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

/// Fraction-free elimination over Z[lambda]; the pivot of each column is
/// the lowest-index remaining row, and rows are divided by the gcd of their
/// entries after every update to keep coefficients small.
fn fraction_free_rank(mut rows: Vec<Vec<Poly>>, cols: usize) -> usize {
    let mut used = vec![false; rows.len()];
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (0..rows.len()).find(|&r| !used[r] && !rows[r][c].is_zero()) else {
            continue;
        };
        used[p] = true;
        rank += 1;
        let pivot_row = rows[p].clone();
        let pivot = pivot_row[c].clone();
        for r in 0..rows.len() {
            if used[r] || rows[r][c].is_zero() {
                continue;
            }
            let factor = rows[r][c].clone();
            let row = &mut rows[r];
            for k in c..cols {
                row[k] = row[k].mul(&pivot).sub(&factor.mul(&pivot_row[k]));
            }
            let g = row[c..].iter().fold(Poly::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in row[c..].iter_mut() {
                    *x = x.div_exact(&g).expect("gcd divides");
                }
            }
        }
    }
    rank
}
