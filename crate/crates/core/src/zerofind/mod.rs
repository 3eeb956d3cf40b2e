//! Nonzero zeros of homogeneous polynomials inside lazy subspaces.

mod complex;
mod real;
mod slice;

pub use complex::{
    find_zero_complex, find_zero_finite_type, is_zero_of, zero_scale, WitnessMethod, ZeroFindConfig, ZeroWitness,
};
pub use real::{probe_real_definite, RealDiagnosis};
pub use slice::{binary_slice, SliceReport};
