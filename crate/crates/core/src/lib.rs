//! Exact computations with cyclotomic association schemes over finite
//! commutative rings.
//!
//! The crate is organised bottom-up:
//!
//! - [`ring`]: finite commutative rings given by dense operation tables,
//!   their unit/radical structure, ideals, quotients and automorphisms.
//! - [`perm`]: explicit permutations and permutation groups, affine and
//!   semilinear groups over a ring, unit subgroups.
//! - [`scheme`]: coherent configurations, Weisfeiler–Leman closure and the
//!   usual scheme operations, plus automorphism groups by
//!   individualization–refinement.
//! - [`sring`]: Schur rings over finite abelian groups.
//! - [`cyclotomic`]: cyclotomic schemes `Cyc(K, R)`, multiplication S-rings,
//!   purity, normality classification and the property suites.
//!
//! Data-parallel loops go through [`exec::Execution`]; with the default
//! `parallel` feature they run on rayon, otherwise sequentially.

pub mod cyclotomic;
pub mod error;
pub mod exec;
pub mod perm;
pub mod ring;
pub mod scheme;
pub mod sring;

pub use error::{Error, Result};
pub use exec::Execution;
