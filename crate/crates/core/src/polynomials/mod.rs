//! Sparse homogeneous polynomials, finite-type and multilinear forms, and polarization.

mod finite_type;
mod hompoly;
mod multi_index;
mod multilinear;
mod polarization;
mod vector;

pub use finite_type::FiniteTypePoly;
pub use hompoly::{HomPoly, TailRule};
pub use multi_index::MultiIndex;
pub use multilinear::MultilinearForm;
pub use polarization::{derived_poly, full_polarization, restrict_to_span, span_scale, vanishes_on_span, VanishingReport};
pub use vector::SparseVector;
