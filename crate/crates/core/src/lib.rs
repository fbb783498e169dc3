//! Small covers and rational homology spheres over right-angled 3-polytopes.
//!
//! A colouring assigns every facet of a simple 3-polytope a vector of
//! `Z_2^k`. This crate checks colourings for properness, orientability and
//! rational homology, enumerates them up to equivalence, and computes their
//! admissible symmetry groups.

pub mod admissible;
pub mod colouring;
pub mod gf2;
pub mod homology;
pub mod polytope;
pub mod search;
pub mod symmetry;
