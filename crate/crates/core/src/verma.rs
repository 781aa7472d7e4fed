//! Verma decompositions of the orbit algebra and sequence diagnostics.
//!
//! For an infinite age `e` is injective and each lowest-weight Verma module
//! contributes one dimension to every level from its start on, so the
//! multiplicities are the first differences `m_n = a_n - a_{n-1}`. The
//! kernel dimensions of `f` give an independent, measure-dependent witness.

use thiserror::Error;

use crate::lie::ActionTruncation;
use crate::measure::{Measure, MeasureError};
use crate::parallel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VermaError {
    #[error("rank sequence decreases at level {level}")]
    Decreasing { level: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VermaEntry {
    pub level: usize,
    /// `2n - mu(X)`, when the age carries a measure.
    pub lowest_weight: Option<Scalar>,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VermaDecomposition {
    pub mu_x: Option<Scalar>,
    pub entries: Vec<VermaEntry>,
}

impl VermaDecomposition {
    pub fn multiplicities(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.multiplicity).collect()
    }
}

/// First differences of `a`, with lowest weights when `mu_x` is known.
pub fn verma_multiplicities(a: &[u64], mu_x: Option<&Scalar>) -> Result<VermaDecomposition, VermaError> {
    let mut entries = Vec::with_capacity(a.len());
    for (n, &an) in a.iter().enumerate() {
        let prev = if n == 0 { 0 } else { a[n - 1] };
        let multiplicity = an.checked_sub(prev).ok_or(VermaError::Decreasing { level: n })?;
        entries.push(VermaEntry {
            level: n,
            lowest_weight: mu_x.map(|mu| crate::lie::h_eigenvalue(mu, n)),
            multiplicity,
        });
    }
    Ok(VermaDecomposition { mu_x: mu_x.cloned(), entries })
}

/// `(1 - q) sum a_n q^n = sum m_n q^n`, both truncated at the length of `a`.
pub fn character_identity_holds(a: &[u64], m: &[u64]) -> bool {
    a.len() == m.len()
        && (0..a.len()).all(|n| a[n] as i128 - if n == 0 { 0 } else { a[n - 1] as i128 } == m[n] as i128)
}

/// `(1 - q) prod_i r_i(q)` truncated to `len` terms: the multiplicity series
/// expected for a disjoint union with rank series `r_i`.
pub fn product_multiplicities(series: &[Vec<u64>], len: usize) -> Vec<i128> {
    let mut prod = vec![0i128; len];
    if len > 0 {
        prod[0] = 1;
    }
    for s in series {
        let mut next = vec![0i128; len];
        for (i, &p) in prod.iter().enumerate() {
            for (j, &c) in s.iter().enumerate().take(len - i) {
                next[i + j] += p * c as i128;
            }
        }
        prod = next;
    }
    (0..len).map(|n| prod[n] - if n == 0 { 0 } else { prod[n - 1] }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLevel {
    pub level: usize,
    pub kernel_dim: usize,
    pub multiplicity: u64,
}

impl KernelLevel {
    pub fn agrees(&self) -> bool {
        self.kernel_dim as u64 == self.multiplicity
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelStatus {
    Checked(Vec<KernelLevel>),
    /// The measure vanishes on some enumerated class.
    Skipped(String),
}

impl KernelStatus {
    pub fn passed(&self) -> Option<bool> {
        match self {
            KernelStatus::Checked(levels) => Some(levels.iter().all(KernelLevel::agrees)),
            KernelStatus::Skipped(_) => None,
        }
    }
}

/// Compares `dim ker(f on level n)` with `m_n` for `n < N`. Skipped unless
/// the measure is nonzero on every class of the truncation.
pub fn kernel_cross_check(action: &ActionTruncation, measure: &Measure) -> Result<KernelStatus, MeasureError> {
    for class in action.levels().iter().flatten() {
        if measure.value(&class.rep)?.is_zero() {
            let size = class.rep.n();
            return Ok(KernelStatus::Skipped(format!("measure vanishes on a class of size {size}")));
        }
    }
    let a: Vec<usize> = action.levels().counts();
    let ns: Vec<usize> = (0..action.max_level()).collect();
    let levels = parallel::map(&ns, |&n| {
        let kernel_dim = match action.f(n) {
            Some(f) => f.kernel_dim(),
            None => a[0],
        };
        let prev = if n == 0 { 0 } else { a[n - 1] };
        KernelLevel { level: n, kernel_dim, multiplicity: a[n].saturating_sub(prev) as u64 }
    });
    Ok(KernelStatus::Checked(levels))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteCase {
    /// A finite structure with `size` points; needs `a_0..a_size`.
    Finite { size: usize },
    /// A disjoint union of a model on `model_size` points with sets.
    MixedWithSets { model_size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCaseReport {
    pub symmetric: Option<bool>,
    pub unimodal: bool,
    /// For the mixed case: whether `m_n = 1` for `n <= m` and `0` after.
    pub shifted_strings: Option<bool>,
}

impl FiniteCaseReport {
    pub fn passed(&self) -> bool {
        self.unimodal && self.symmetric != Some(false) && self.shifted_strings != Some(false)
    }
}

pub fn finite_case_decomposition(a: &[u64], case: &FiniteCase) -> FiniteCaseReport {
    let unimodal = is_unimodal(a);
    match *case {
        FiniteCase::Finite { size } => {
            let symmetric = (a.len() > size).then(|| (0..=size).all(|n| a[n] == a[size - n]));
            FiniteCaseReport { symmetric, unimodal, shifted_strings: None }
        }
        FiniteCase::MixedWithSets { model_size } => {
            let ok = (0..a.len()).all(|n| {
                let m = a[n] as i128 - if n == 0 { 0 } else { a[n - 1] as i128 };
                m == if n <= model_size { 1 } else { 0 }
            });
            FiniteCaseReport { symmetric: None, unimodal, shifted_strings: Some(ok) }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceDiagnostics {
    pub monotone: bool,
    pub symmetric: bool,
    pub unimodal: bool,
    pub log_concave: bool,
}

fn is_unimodal(a: &[u64]) -> bool {
    let peak = a.windows(2).position(|w| w[1] < w[0]).unwrap_or(a.len());
    a[peak.min(a.len())..].windows(2).all(|w| w[1] <= w[0])
}

/// Flags computed on the given prefix only.
pub fn sequence_diagnostics(a: &[u64]) -> SequenceDiagnostics {
    SequenceDiagnostics {
        monotone: a.windows(2).all(|w| w[0] <= w[1]),
        symmetric: a.iter().eq(a.iter().rev()),
        unimodal: is_unimodal(a),
        log_concave: a.windows(3).all(|w| (w[1] as u128).pow(2) >= w[0] as u128 * w[2] as u128),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_is_one_verma() {
        let d = verma_multiplicities(&[1; 6], Some(&Scalar::lambda())).unwrap();
        assert_eq!(d.multiplicities(), [1, 0, 0, 0, 0, 0]);
        assert_eq!(d.entries[0].lowest_weight, Some(-Scalar::lambda()));
    }

    #[test]
    fn fibonacci_differences() {
        let a = [1, 1, 2, 3, 5, 8, 13, 21];
        let d = verma_multiplicities(&a, None).unwrap();
        assert_eq!(d.multiplicities(), [1, 0, 1, 1, 2, 3, 5, 8]);
        assert!(character_identity_holds(&a, &d.multiplicities()));
        assert!(!character_identity_holds(&a, &[1, 0, 1, 1, 2, 3, 5, 9]));
    }

    #[test]
    fn decreasing_is_an_error() {
        assert_eq!(verma_multiplicities(&[1, 1, 1, 0], None), Err(VermaError::Decreasing { level: 3 }));
    }

    #[test]
    fn product_series() {
        // two copies of 1,1,1,...: (1 - q) / (1 - q)^2 = 1 / (1 - q)
        assert_eq!(product_multiplicities(&[vec![1; 5], vec![1; 5]], 5), vec![1; 5]);
    }

    #[test]
    fn finite_cases() {
        let k2 = finite_case_decomposition(&[1, 1, 1], &FiniteCase::Finite { size: 2 });
        assert_eq!(k2.symmetric, Some(true));
        assert!(k2.passed());
        let mixed = finite_case_decomposition(&[1, 2, 3, 3, 3], &FiniteCase::MixedWithSets { model_size: 2 });
        assert!(mixed.passed());
        let bad = finite_case_decomposition(&[1, 2, 3, 4], &FiniteCase::MixedWithSets { model_size: 2 });
        assert!(!bad.passed());
    }

    #[test]
    fn diagnostics() {
        let fib = sequence_diagnostics(&[1, 1, 2, 3, 5, 8]);
        assert!(fib.monotone && !fib.log_concave && !fib.symmetric && fib.unimodal);
        let ones = sequence_diagnostics(&[1; 7]);
        assert!(ones.monotone && ones.symmetric && ones.unimodal && ones.log_concave);
        assert!(sequence_diagnostics(&[1, 1, 2, 3, 5, 7, 11]).monotone);
        assert!(!sequence_diagnostics(&[1, 3, 1, 3]).unimodal);
    }
}
