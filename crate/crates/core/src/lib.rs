//! Frobenius-splitting invariants of seminormal affine monoid algebras
//! `k[S]` in characteristic `p`.
//!
//! A [`SeminormalMonoid`] is stored as a pointed rational cone together with
//! a lattice `M_D` for each face `D`. From that data the crate computes the
//! face classification, decides which monomial maps `π_a` are
//! homomorphisms `F^e_*R → R`, counts splitting numbers, computes the
//! splitting ratio as a lattice volume, and lists the Cartier-fixed ideals.
//!
//! ```
//! use semifrob::{catalog, invariants, Prime};
//!
//! let s = catalog::whitney();
//! let p = Prime::new(3).unwrap();
//! assert!(s.is_f_split(p));
//! assert_eq!(invariants::splitting_ratio(&s, p).unwrap().to_string(), "1/2");
//! ```

pub mod cartier;
pub mod catalog;
pub mod cli;
pub mod cone;
pub mod frac;
pub mod frob;
pub mod invariants;
pub mod linalg;
pub mod monoid;
pub mod points;
pub mod polytope;
pub mod prime;

pub use cartier::FaceUnionIdeal;
pub use cone::{FaceId, FaceLatticeCone};
pub use frac::FracPoint;
pub use linalg::{IntVector, QuotientInvariants, Sublattice};
pub use monoid::{FaceClassification, SeminormalMonoid};
pub use prime::Prime;
