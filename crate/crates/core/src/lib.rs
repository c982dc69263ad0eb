//! Log canonical thresholds of irreducible plane curve singularities.
//!
//! The crate computes the threshold of a germ `f in k[[x, y]]` in three
//! independent ways: from the key-polynomial description of the curve
//! valuation, from the Newton polygon of the monomial ideal of the key
//! polynomials, and from an explicit embedded resolution by point blow-ups.

pub mod arith;
pub mod error;
pub mod poly;
pub mod skp;
pub mod newton;
pub mod valtree;
pub mod resolution;

pub use arith::{ExtRat, Field, FieldElem, Rat};
pub use error::{Error, Result};
pub use poly::BivarPoly;
