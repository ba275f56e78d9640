//! Exact generators, relations and fundamental-domain geometry for the
//! arithmetic lattice `Γ ⊂ PU(2,1)` defined over `Z[ζ₁₂]`, together with its
//! torsion-free index-864 subgroup `Π`.
//!
//! The group-theoretic parts ([`cyclotomic`], [`lattice`], [`orbit_search`],
//! [`presentation`], [`subgroup_pi`]) are exact; [`ball_numeric`] works in
//! double precision on the unit ball `B(C²)`.

pub mod ball_numeric;
pub mod cyclotomic;
pub mod error;
pub mod lattice;
pub mod orbit_search;
mod par;
pub mod presentation;
pub mod subgroup_pi;
pub mod word;

pub use cyclotomic::{quad_cmp, CycInt, F9Elem, QuadInt};
pub use error::{Error, Result};
pub use lattice::{Constants, DetClass, Mat3, ProjUnitary};
pub use word::{Alphabet, Word};
