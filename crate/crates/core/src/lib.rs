//! Exact-arithmetic engine for multi-parameter Kazhdan-Lusztig bases,
//! cell partitions and the asymptotic type-B structures (E-basis,
//! generalized Robinson-Schensted invariant, the ring J_n and the
//! homomorphisms phi and Phi) on finite Coxeter groups.
//!
//! All coefficients live in A = Z[Gamma] for a lexicographically ordered
//! Gamma = Z^k; nothing is ever rounded. The heavy tables (KL basis,
//! structure constants) are built once per [`ctx::Ctx`] and then shared
//! read-only.

pub mod cells;
pub mod coxeter;
pub mod ctx;
pub mod error;
pub mod grpring;
pub mod hecke;
pub mod jring;
pub mod klsolve;
pub mod linalg;
pub mod parabolic;
pub mod typeb;

pub use coxeter::{CoxeterGroup, CoxeterType, Elem, GenSet};
pub use ctx::Ctx;
pub use error::{Error, Result};
pub use grpring::{AElem, Exponent, Fraction, QElem, Region, WeightFunction};
