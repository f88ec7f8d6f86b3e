//! Analysis toolkit for linear ordinary differential operators with
//! polynomial coefficients acting on polynomial root loci.
//!
//! The crate classifies operators (Fuchs index, degeneracy, exact
//! solvability, Newton-polygon class), decides and falsifies invariance of
//! disks and lines for root sets, computes certified lower bounds for
//! minimal invariant sets, and renders minimal Hutchinson-type invariant
//! sets with a seeded chaos game.

pub mod exact;
pub mod parse;
pub mod poly;

pub mod diffop;
pub mod hutchinson;
pub mod invariance;
pub mod newton;
pub mod roots;

pub use exact::ExactComplex;
pub use poly::{Poly, PolyF};
