//! Certified lazy construction of infinite-dimensional linear subspaces
//! inside zero sets of homogeneous polynomials over ℚ, ℚ(i) and ℂ.

pub mod builder;
pub mod error;
pub mod polynomials;
pub mod scalars;
pub mod spaces;
pub mod zerofind;

pub use error::{Error, ErrorClass, Result};
