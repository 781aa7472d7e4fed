//! Exact orbit algebras of oligomorphic groups presented as ages.
//!
//! An [`age::Age`] describes an amalgamation class of finite relational
//! structures. From it the crate enumerates graded orbit bases, evaluates
//! R-measures over the rational function field Q(lambda), builds the
//! invariant matrices of the sl2 and gl_r actions, verifies the Lie and
//! measure axioms exactly, and decomposes the orbit algebra into lowest
//! weight Verma modules.
//!
//! ```
//! use orbit_lie::age::{Age, AgeSpec};
//! use orbit_lie::structure::{FiniteStructure, Signature};
//!
//! let sig = Signature::new(["E"]).unwrap();
//! let k2 = FiniteStructure::from_pairs(sig, 2, [(0, 0, 1), (0, 1, 0)]).unwrap();
//! let age = Age::new(AgeSpec::TimesQ(Box::new(AgeSpec::FiniteModel(k2)))).unwrap();
//! let levels = age.enumerate_levels(6, None).unwrap();
//! assert_eq!(levels.counts(), vec![1, 1, 2, 3, 5, 8, 13]);
//! ```

pub mod age;
pub mod lie;
pub mod linalg;
pub mod measure;
pub mod parallel;
pub mod scalar;
pub mod structure;
pub mod verma;

pub use age::{Age, AgeSpec};
pub use measure::Measure;
pub use scalar::Scalar;
pub use structure::{FiniteStructure, IsoClassId, Signature};
