//! Curve configurations over integer intersection lattices.
//!
//! A reducible curve is modeled as a weighted graph: vertices carry a
//! homology class and a positive multiplicity, edges are derived from the
//! intersection pairing. This crate implements the calculus on such graphs —
//! curve expansion, the three combination moves, simple combinatorial
//! blow-downs and blow-ups — together with the rearrangement algorithm, the
//! genus and dimension bounds, the classification of maximal-dimension
//! configurations, and an exhaustive census that verifies every bound and
//! the classification over bounded enumerations.
//!
//! All arithmetic is exact. Coefficients are generic over any primitive
//! signed integer via [`num::Coeff`]; the aliases below fix `i64`, which is
//! ample for desk-scale runs. Signatures of intersection forms are computed
//! with exact rational elimination, never floating point.
//!
//! Whether a homology class is actually represented by a subvariety is an
//! analytic question outside this model; every class handled here is treated
//! as effective by assumption.

pub mod census;
pub mod classify;
pub mod config;
pub mod dot;
pub mod io;
pub mod lattice;
pub mod moves;
pub mod num;
pub mod rearrange;

pub use num::{Coeff, OverflowError};

/// Default scalar type for CLI and document I/O.
pub type Coefficient = i64;
/// Intersection lattice over the default scalar.
pub type Lattice = lattice::IntersectionLattice<Coefficient>;
/// Homology class over the default scalar.
pub type Class = lattice::HomologyClass<Coefficient>;
/// Curve configuration over the default scalar.
pub type Config = config::CurveConfiguration<Coefficient>;
