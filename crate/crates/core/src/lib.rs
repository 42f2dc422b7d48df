//! Exact arithmetic in the Higman-Thompson groups V_{n,r} and in the
//! stabilizers of finite sets of rational points.
//!
//! Everything is represented by finite prefix-replacement tables in canonical
//! form, so all computations and equalities are exact.  The `constructions`
//! module builds executable witnesses for the structural results: attracting
//! elements, ascending HNN decompositions, the abelianization map, commutator
//! membership, and the conjugator realizing Fix(S) = Fix(S') whenever the two
//! sets have the same size.
//!
//! All values are immutable and all operations are pure functions, so the
//! library is safe to use concurrently without synchronization.

pub mod clopen;
pub mod constructions;
pub mod element;
pub mod error;
pub mod germs;
pub mod testkit;
pub mod text;
pub mod words;

pub use clopen::{ClopenSet, TypeResidue};
pub use element::{Element, Parity, PartialMap};
pub use error::{Error, Result};
pub use germs::{germ_exponent, germ_tuple, in_fix, in_fix0, GermExponent, RationalSet};
pub use words::{Address, RationalPoint, Space};
